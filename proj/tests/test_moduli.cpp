#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "stagedlt/fgl.hpp"
#include "stagedlt/moduli.hpp"
#include "stagedlt/series.hpp"
#include "stagedlt/staged.hpp"
#include "stagedlt/wire.hpp"

using lt::ClassifyingMap;
using lt::CoordinateChange;
using lt::Fgl;
using lt::GaloisRing;
using lt::Int;
using lt::Json;
using lt::StagedDeformation;
using lt::StagedElement;
using lt::StagedMap;
using lt::StagedRing;
using lt::TruncationProfile;
using lt::TruncSeries1;
using lt::TruncSeries2;

namespace {

template <class F>
std::string thrown_code(F&& fn) {
    try {
        fn();
    } catch (const lt::DomainError& e) {
        return e.code();
    }
    return "";
}

TruncationProfile prof(int D, int M, std::vector<int> N, int Nx) {
    TruncationProfile p;
    p.D = D;
    p.M = M;
    p.Nx = Nx;
    p.N = std::move(N);
    return p;
}

std::vector<int> slack_caps(int a, int D, const std::vector<int>& heights) {
    std::vector<int> N;
    for (int hj : heights) N.push_back(hj >= 1 ? a + (hj - 1) * D : 1);
    return N;
}

StagedRing deform_ring(int p, int a, int h, std::vector<int> heights, int D,
                       int Nx) {
    auto N = slack_caps(a, D, heights);
    int M = 8;
    for (int nj : N) M = std::max(M, nj + 2);
    return StagedRing(GaloisRing(p, a, 1), h, std::move(heights),
                      prof(D, M, std::move(N), Nx));
}

bool is_ppow(int d, int p) {
    while (d % p == 0) d /= p;
    return d == 1;
}

int ipow(int b, int e) {
    int r = 1;
    while (e-- > 0) r *= b;
    return r;
}

StagedElement rnd_small(const StagedRing& R, int stage, std::mt19937& g) {
    const auto& sp = R.spec();
    std::uniform_int_distribution<int> cd(0, 3), ed(0, 1);
    StagedElement out = R.zero(stage);
    int nmons = 1 + static_cast<int>(g() % 2);
    for (int m = 0; m < nmons; ++m) {
        std::vector<Int> co(static_cast<std::size_t>(sp.coeff.n()));
        for (auto& c : co) c = cd(g);
        std::vector<int> e(static_cast<std::size_t>(sp.h - 1));
        for (auto& ei : e) ei = ed(g);
        out = out + R.monomial(sp.coeff.make(co), e, stage);
    }
    return out;
}

// random element of the window image of (p, u_1, ..., u_{t-1})
StagedElement rnd_ideal(const StagedRing& R, int t, std::mt19937& g) {
    StagedElement out = R.p_elem(0) * rnd_small(R, 0, g);
    for (int s = 1; s < t; ++s)
        if (g() % 2) out = out + R.gen(s, 0) * rnd_small(R, 0, g);
    return out;
}

// conjugator in the solver's gauge: linear coefficient exactly one, maximal-
// ideal coefficients away from the degenerate p-power degrees
TruncSeries1 rnd_gauge_phi(const StagedRing& R, std::mt19937& g) {
    const auto& sp = R.spec();
    int p = static_cast<int>(sp.coeff.p());
    TruncSeries1 f = TruncSeries1::identity(R, 0);
    for (int d = 2; d < f.xcap(); ++d) {
        if (is_ppow(d, p)) continue;
        f.set_coeff(d, rnd_ideal(R, sp.h, g));
    }
    return f;
}

// twist images u_t + (element of the t-th lower ideal)
std::vector<StagedElement> rnd_twist(const StagedRing& R, std::mt19937& g) {
    std::vector<StagedElement> v;
    for (int t = 1; t < R.spec().h; ++t)
        v.push_back(R.gen(t, 0) + rnd_ideal(R, t, g));
    return v;
}

StagedElement rnd_elem_at(const StagedRing& R, int s, std::mt19937& g) {
    StagedElement x = rnd_small(R, s, g);
    for (int j = 1; j <= s; ++j)
        if (g() % 2) x = x * R.gen_inv(R.spec().heights[static_cast<std::size_t>(j) - 1], s);
    return x;
}

} // namespace

TEST_CASE("the canonical deformation validates at every stage") {
    for (auto [p, a, h, hts] : {std::tuple<int, int, int, std::vector<int>>{2, 3, 2, {1}},
                                {3, 2, 2, {1}},
                                {2, 2, 3, {2, 1}}}) {
        StagedRing R = deform_ring(p, a, h, hts, h == 3 ? 12 : 8, ipow(p, h) + 2);
        StagedDeformation D = lt::tautological_deformation(R);
        auto rep = lt::validate_deformation(D);
        CHECK(rep.pass);
        CHECK(rep.detail.empty());
        CHECK(D.laws.size() == hts.size() + 1);
        CHECK(D.connect.size() == hts.size());
    }
}

TEST_CASE("a conjugated stage law is flagged as a non-pushforward") {
    StagedRing R = deform_ring(2, 3, 2, {1}, 8, 6);
    StagedDeformation D = lt::tautological_deformation(R);
    TruncSeries1 psi = TruncSeries1::identity(R, 1);
    psi.set_coeff(2, R.gen(1, 1));
    Fgl twisted = lt::conjugate(D.laws[1], psi);
    REQUIRE(twisted != D.laws[1]);
    D.laws[1] = twisted;
    auto rep = lt::validate_deformation(D);
    CHECK_FALSE(rep.pass);
    CHECK(rep.detail.rfind("pushforward@stage1", 0) == 0);
}

TEST_CASE("claimed stage heights are measured against the laws") {
    StagedRing R = deform_ring(2, 2, 3, {2, 1}, 12, 10);
    StagedDeformation D = lt::tautological_deformation(R);
    D.heights = {2, 2};
    auto hr = lt::fgl_height(D.laws[2], 3);
    REQUIRE(hr.value);
    REQUIRE(*hr.value == 1);
    auto rep = lt::validate_deformation(D);
    CHECK_FALSE(rep.pass);
    CHECK(rep.detail == "height@stage2: expected 2, measured " + hr.str());
}

TEST_CASE("classify returns identity data on the canonical deformation") {
    for (auto [p, a, h, hts] : {std::tuple<int, int, int, std::vector<int>>{2, 3, 2, {1}},
                                {3, 2, 2, {1}},
                                {2, 2, 3, {2, 1}}}) {
        StagedRing R = deform_ring(p, a, h, hts, h == 3 ? 12 : 8, ipow(p, h) + 2);
        StagedDeformation D = lt::tautological_deformation(R);
        ClassifyingMap C = lt::classify(D);
        REQUIRE(C.f.size() == hts.size() + 1);
        REQUIRE(C.phi.size() == hts.size() + 1);
        for (int s = 0; s <= static_cast<int>(hts.size()); ++s) {
            CHECK(lt::staged_map_equal(C.f[static_cast<std::size_t>(s)],
                                       lt::identity_map(R, s)));
            CHECK(C.phi[static_cast<std::size_t>(s)] == TruncSeries1::identity(R, s));
        }
        CHECK(C.steps.empty());
    }
}

TEST_CASE("classify recovers the planted twist and conjugator") {
    StagedRing R = deform_ring(2, 3, 2, {1}, 8, 6);
    std::mt19937 g(4451);
    StagedMap tw = lt::identity_map(R, 0);
    tw.images[0] = R.gen(1, 0) + R.p_elem(0);
    TruncSeries1 phi = rnd_gauge_phi(R, g);
    StagedDeformation D = lt::induced_deformation(R, tw, phi);
    CHECK(lt::validate_deformation(D).pass);

    ClassifyingMap C = lt::classify(D);
    CHECK(C.f[0].images[0] == tw.images[0]);
    CHECK(C.phi[0] == phi);
    CHECK(C.f[1].images[0] == tw.images[0].promote(1));
    for (int j = 1; j < phi.xcap(); ++j)
        CHECK(C.phi[1].coeff(j) == C.phi[0].coeff(j).promote(1));
    CHECK_FALSE(C.steps.empty());
    for (const auto& st : C.steps) CHECK(st.unit_pivot);
}

TEST_CASE("classify round-trips random twists") {
    int trips = 0;
    for (auto [p, a, seed] : {std::tuple<int, int, int>{2, 3, 101}, {3, 2, 202}}) {
        StagedRing R = deform_ring(p, a, 2, {1}, 8, p * p + 2);
        std::mt19937 g(static_cast<unsigned>(seed));
        for (int trial = 0; trial < 5; ++trial) {
            StagedMap tw = lt::identity_map(R, 0);
            auto v = rnd_twist(R, g);
            tw.images = v;
            TruncSeries1 phi = rnd_gauge_phi(R, g);
            StagedDeformation D = lt::induced_deformation(R, tw, phi);
            ClassifyingMap C = lt::classify(D);
            for (std::size_t i = 0; i < v.size(); ++i) CHECK(C.f[0].images[i] == v[i]);
            CHECK(C.phi[0] == phi);
            for (const auto& st : C.steps) CHECK(st.unit_pivot);
            ++trips;
        }
    }
    {
        StagedRing R = deform_ring(2, 2, 3, {2, 1}, 12, 10);
        std::mt19937 g(909);
        for (int trial = 0; trial < 2; ++trial) {
            StagedMap tw = lt::identity_map(R, 0);
            auto v = rnd_twist(R, g);
            tw.images = v;
            TruncSeries1 phi = rnd_gauge_phi(R, g);
            StagedDeformation D = lt::induced_deformation(R, tw, phi);
            ClassifyingMap C = lt::classify(D);
            for (std::size_t i = 0; i < v.size(); ++i) CHECK(C.f[0].images[i] == v[i]);
            CHECK(C.phi[0] == phi);
            ++trips;
        }
    }
    CHECK(trips == 12);
}

TEST_CASE("classify rejects a stage law of the wrong height") {
    StagedRing R = deform_ring(2, 1, 2, {1}, 8, 6);
    StagedDeformation D = lt::tautological_deformation(R);
    D.laws[1] = lt::fgl_honda(R, 2).at_stage(1);
    CHECK(thrown_code([&] { lt::classify(D); }) == "HeightMismatch");
}

TEST_CASE("classify reports an unsolvable starting law") {
    StagedRing R = deform_ring(2, 3, 2, {1}, 8, 6);
    Fgl G = lt::hazewinkel_deformation(R);
    TruncSeries2 S = G.series();
    // breaking the unit axiom puts the law outside every conjugacy orbit
    S.set_coeff(2, 0, S.coeff(2, 0) + R.from_int(4, 0));
    StagedDeformation D = lt::tautological_deformation(R);
    D.laws[0] = Fgl(S);
    D.laws[1] = lt::fgl_map(D.connect[0], D.laws[0]);
    CHECK(thrown_code([&] { lt::classify(D); }) == "NonLiftable");
}

TEST_CASE("identity coordinate images give identity maps at every stage") {
    StagedRing R = deform_ring(2, 2, 3, {2, 1}, 12, 10);
    std::vector<StagedElement> v = {R.gen(1, 0), R.gen(2, 0)};
    CoordinateChange CC = lt::change_coordinates(R, v);
    REQUIRE(CC.fwd.size() == 3);
    for (int s = 0; s <= 2; ++s) {
        CHECK(lt::staged_map_equal(CC.fwd[static_cast<std::size_t>(s)],
                                   lt::identity_map(R, s)));
        CHECK(lt::staged_map_equal(CC.inv[static_cast<std::size_t>(s)],
                                   lt::identity_map(R, s)));
    }
}

TEST_CASE("shifted parameter inverts to the alternating series") {
    for (auto [p, a] : {std::pair<int, int>{2, 3}, {3, 2}}) {
        StagedRing R = deform_ring(p, a, 2, {1}, 8, p * p + 2);
        std::vector<StagedElement> v = {R.gen(1, 0) + R.p_elem(0)};
        CoordinateChange CC = lt::change_coordinates(R, v);

        StagedElement expect = R.zero(1);
        Int pj = 1;
        for (int j = 0; j < a; ++j) {
            Int c = (j % 2 == 0) ? pj : -pj;
            expect = expect + R.from_int(c, 1) *
                                  R.gen_inv(1, 1).pow(static_cast<std::uint64_t>(1 + j));
            pj *= p;
        }
        CHECK(lt::apply_staged_map(CC.fwd[1], R.gen_inv(1, 1)) == expect);
        CHECK((R.gen(1, 1) + R.p_elem(1)).try_invert() == expect);

        std::mt19937 g(61 + static_cast<unsigned>(p));
        for (int s = 0; s <= 1; ++s)
            for (int i = 0; i < 25; ++i) {
                StagedElement x = rnd_elem_at(R, s, g);
                CHECK(lt::apply_staged_map(CC.inv[static_cast<std::size_t>(s)],
                                           lt::apply_staged_map(
                                               CC.fwd[static_cast<std::size_t>(s)], x)) == x);
                CHECK(lt::apply_staged_map(CC.fwd[static_cast<std::size_t>(s)],
                                           lt::apply_staged_map(
                                               CC.inv[static_cast<std::size_t>(s)], x)) == x);
            }
    }
}

TEST_CASE("two-stage coordinate change composes to the identity") {
    StagedRing R = deform_ring(2, 2, 3, {2, 1}, 12, 10);
    std::vector<StagedElement> v = {R.gen(1, 0) + R.p_elem(0) * R.gen(2, 0),
                                    R.gen(2, 0) + R.p_elem(0)};
    CoordinateChange CC = lt::change_coordinates(R, v);
    REQUIRE(CC.fwd.size() == 3);
    std::mt19937 g(733);
    for (int s = 0; s <= 2; ++s)
        for (int i = 0; i < 15; ++i) {
            StagedElement x = rnd_elem_at(R, s, g);
            CHECK(lt::apply_staged_map(CC.inv[static_cast<std::size_t>(s)],
                                       lt::apply_staged_map(
                                           CC.fwd[static_cast<std::size_t>(s)], x)) == x);
            CHECK(lt::apply_staged_map(CC.fwd[static_cast<std::size_t>(s)],
                                       lt::apply_staged_map(
                                           CC.inv[static_cast<std::size_t>(s)], x)) == x);
        }
}

TEST_CASE("degenerate coordinate images are rejected") {
    StagedRing R = deform_ring(2, 3, 2, {1}, 8, 6);
    CHECK(thrown_code([&] {
              lt::change_coordinates(R, {R.p_elem(0)});
          }) == "NotLubinTate");
    CHECK(thrown_code([&] {
              lt::change_coordinates(R, {R.gen(1, 0) + R.one(0)});
          }) == "NotLubinTate");
}

TEST_CASE("extension through the canonical stage is the canonical map") {
    StagedRing R = deform_ring(2, 3, 2, {1}, 8, 6);
    StagedDeformation D = lt::tautological_deformation(R);
    StagedMap e = lt::extend_map(lt::identity_map(R, 0), 1, D);
    CHECK(lt::staged_map_equal(e, lt::identity_map(R, 1)));
}

TEST_CASE("extension agrees with the coordinate change") {
    StagedRing R = deform_ring(2, 3, 2, {1}, 8, 6);
    StagedDeformation D = lt::tautological_deformation(R);
    std::vector<StagedElement> v = {R.gen(1, 0) + R.p_elem(0)};
    CoordinateChange CC = lt::change_coordinates(R, v);
    StagedMap e = lt::extend_map(CC.fwd[0], 1, D);
    CHECK(lt::staged_map_equal(e, CC.fwd[1]));
}

TEST_CASE("extension failure modes") {
    StagedRing R2 = deform_ring(2, 3, 2, {1}, 8, 6);
    StagedDeformation D2 = lt::tautological_deformation(R2);
    StagedMap bad = lt::identity_map(R2, 0);
    bad.images[0] = R2.p_elem(0);
    CHECK(thrown_code([&] { lt::extend_map(bad, 1, D2); }) == "MapUndefined");

    StagedRing R3 = deform_ring(2, 2, 3, {2, 1}, 12, 10);
    StagedDeformation D3 = lt::tautological_deformation(R3);
    StagedMap esc = lt::identity_map(R3, 0);
    esc.images[0] = R3.one(0) + R3.gen(1, 0);
    CHECK(thrown_code([&] { lt::extend_map(esc, 1, D3); }) == "IdealEscape");
}

TEST_CASE("deformation bundles round trip through json") {
    StagedRing R = deform_ring(2, 3, 2, {1}, 8, 6);
    std::mt19937 g(5801);
    StagedMap tw = lt::identity_map(R, 0);
    tw.images[0] = R.gen(1, 0) + R.p_elem(0);
    for (const StagedDeformation& D :
         {lt::tautological_deformation(R),
          lt::induced_deformation(R, tw, rnd_gauge_phi(R, g))}) {
        Json j = lt::deformation_to_json(D);
        StagedDeformation E = lt::deformation_from_json(j);
        CHECK(E.ring.spec() == R.spec());
        CHECK(E.heights == D.heights);
        REQUIRE(E.laws.size() == D.laws.size());
        for (std::size_t s = 0; s < D.laws.size(); ++s) CHECK(E.laws[s] == D.laws[s]);
        REQUIRE(E.connect.size() == D.connect.size());
        for (std::size_t s = 0; s < D.connect.size(); ++s)
            CHECK(lt::staged_map_equal(E.connect[s], D.connect[s]));
        CHECK(lt::deformation_to_json(E).dump() == j.dump());
    }
}

TEST_CASE("malformed deformation bundles are rejected") {
    StagedRing R = deform_ring(2, 3, 2, {1}, 8, 6);
    Json j = lt::deformation_to_json(lt::tautological_deformation(R));

    Json missing = j;
    missing.erase("fgls");
    CHECK(thrown_code([&] { lt::deformation_from_json(missing); }) == "UnknownFormat");

    Json badres = j;
    badres["residue"]["p"] = 5;
    CHECK(thrown_code([&] { lt::deformation_from_json(badres); }) == "UnknownFormat");

    Json badstage = j;
    badstage["maps"][0]["stage"] = 7;
    CHECK(thrown_code([&] { lt::deformation_from_json(badstage); }) == "UnknownFormat");

    CHECK(thrown_code([&] { lt::deformation_from_json(Json::object()); }) ==
          "UnknownFormat");
}

TEST_CASE("classifying data serializes one entry per stage") {
    StagedRing R = deform_ring(2, 3, 2, {1}, 8, 6);
    ClassifyingMap C = lt::classify(lt::tautological_deformation(R));
    Json j = lt::classifying_to_json(C);
    REQUIRE(j["f"].size() == 2);
    REQUIRE(j["phi"].size() == 2);
    CHECK(lt::series1_from_json(R, j["phi"][0]) == TruncSeries1::identity(R, 0));
    StagedMap m = lt::staged_map_from_json(R, R, j["f"][1]);
    CHECK(lt::staged_map_equal(m, lt::identity_map(R, 1)));
    REQUIRE(j["steps"].is_array());
    CHECK(j["steps"].empty());

    StagedMap tw = lt::identity_map(R, 0);
    tw.images = {R.gen(1, 0) + R.p_elem(0)};
    ClassifyingMap C2 = lt::classify(
        lt::induced_deformation(R, tw, TruncSeries1::identity(R, 0)));
    Json j2 = lt::classifying_to_json(C2);
    REQUIRE(!j2["steps"].empty());
    for (const auto& st : j2["steps"]) {
        CHECK(st["degree"].get<int>() >= 1);
        CHECK(!st["kind"].get<std::string>().empty());
        CHECK(st["unit_pivot"].is_boolean());
    }
}
