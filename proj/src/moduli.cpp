#include "stagedlt/moduli.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stagedlt/errors.hpp"

namespace lt {

namespace {

std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

Int binom(int n, int k) {
    Int r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// minimal ideal depth of the coefficientwise difference; returns a value
// past every cap when the laws agree exactly
int defect_depth(const Fgl& A, const Fgl& B, int tI) {
    int best = -1;
    for (int i = 0; i < A.xcap(); ++i)
        for (int j = 0; i + j < A.xcap(); ++j) {
            StagedElement d = A.series().coeff(i, j) - B.series().coeff(i, j);
            if (d.is_zero()) continue;
            int dd = d.ideal_degree(tI);
            if (best < 0 || dd < best) best = dd;
        }
    return best;
}

void check_deformation_shape(const StagedDeformation& D) {
    const auto& sp = D.ring.spec();
    int n = static_cast<int>(D.heights.size());
    if (static_cast<int>(sp.heights.size()) != n)
        fail("BadInput", "claimed heights list and structural stage count disagree");
    if (static_cast<int>(D.laws.size()) != n + 1)
        fail("BadInput", "a deformation needs one law per stage 0..n");
    if (static_cast<int>(D.connect.size()) != n)
        fail("BadInput", "a deformation needs one connecting map per localized stage");
    for (int s = 0; s <= n; ++s) {
        if (!(D.laws[static_cast<std::size_t>(s)].ring().spec() == sp))
            fail("MixedRings", "law at stage " + std::to_string(s) + " lives on a different family");
        if (D.laws[static_cast<std::size_t>(s)].stage() != s)
            fail("BadInput", "law at position " + std::to_string(s) + " carries the wrong stage tag");
    }
    for (int s = 1; s <= n; ++s) {
        const StagedMap& m = D.connect[static_cast<std::size_t>(s) - 1];
        if (!(*m.source == sp) || !(*m.target == sp))
            fail("MixedRings", "connecting map at stage " + std::to_string(s) + " leaves the family");
        if (m.stage != s)
            fail("BadInput", "connecting map at stage " + std::to_string(s) + " has the wrong stage tag");
    }
}

StagedDeformation push_up(const StagedRing& R, Fgl F0) {
    StagedDeformation D{R, R.spec().heights, {}, {}};
    D.laws.push_back(std::move(F0));
    int n = static_cast<int>(R.spec().heights.size());
    for (int s = 1; s <= n; ++s) {
        D.connect.push_back(identity_map(R, s));
        D.laws.push_back(fgl_map(D.connect.back(), D.laws[static_cast<std::size_t>(s) - 1]));
    }
    return D;
}

} // namespace

bool staged_map_equal(const StagedMap& f, const StagedMap& g) {
    if (f.stage != g.stage || f.images.size() != g.images.size()) return false;
    if (!(*f.source == *g.source) || !(*f.target == *g.target)) return false;
    for (std::size_t i = 0; i < f.images.size(); ++i)
        if (!(f.images[i] == g.images[i])) return false;
    return true;
}

StagedDeformation tautological_deformation(const StagedRing& R) {
    return push_up(R, hazewinkel_deformation(R));
}

StagedDeformation induced_deformation(const StagedRing& R, const StagedMap& g0,
                                      const TruncSeries1& phi0) {
    if (!(*g0.source == R.spec()) || !(*g0.target == R.spec()))
        fail("MixedRings", "classifying data must live on the deformation's own family");
    if (g0.stage != 0)
        fail("BadInput", "the inducing map must land at stage 0");
    return push_up(R, conjugate(fgl_map(g0, hazewinkel_deformation(R)), phi0));
}

DeformationReport validate_deformation(const StagedDeformation& D) {
    DeformationReport rep;
    auto failed = [&rep](std::string d) {
        rep.pass = false;
        rep.detail = std::move(d);
        return rep;
    };
    const auto& sp = D.ring.spec();
    int n = static_cast<int>(D.heights.size());
    if (static_cast<int>(sp.heights.size()) != n)
        return failed("shape: claimed heights list and structural stage count disagree");
    if (static_cast<int>(D.laws.size()) != n + 1)
        return failed("shape: need one law per stage 0..n");
    if (static_cast<int>(D.connect.size()) != n)
        return failed("shape: need one connecting map per localized stage");
    for (int s = 0; s <= n; ++s) {
        const Fgl& F = D.laws[static_cast<std::size_t>(s)];
        if (!(F.ring().spec() == sp) || F.stage() != s)
            return failed("shape: law at stage " + std::to_string(s) + " is mistagged");
    }
    for (int s = 1; s <= n; ++s) {
        const StagedMap& m = D.connect[static_cast<std::size_t>(s) - 1];
        if (!(*m.source == sp) || !(*m.target == sp) || m.stage != s)
            return failed("shape: connecting map at stage " + std::to_string(s) + " is mistagged");
    }

    Fgl G = hazewinkel_deformation(D.ring);
    for (int i = 0; i < G.xcap(); ++i)
        for (int j = 0; i + j < G.xcap(); ++j) {
            StagedElement d = D.laws[0].series().coeff(i, j) - G.series().coeff(i, j);
            if (!d.mod_ideal(sp.h).is_zero())
                return failed("residue@stage0: coefficient (" + std::to_string(i) + "," +
                              std::to_string(j) + ") does not reduce to the residue law");
        }

    for (int s = 1; s <= n; ++s) {
        Fgl want = fgl_map(D.connect[static_cast<std::size_t>(s) - 1],
                           D.laws[static_cast<std::size_t>(s) - 1]);
        if (!(want == D.laws[static_cast<std::size_t>(s)]))
            return failed("pushforward@stage" + std::to_string(s) +
                          ": the law is not the pushforward of the previous stage");
    }

    for (int s = 0; s <= n; ++s) {
        int expect = (s == 0) ? sp.h : D.heights[static_cast<std::size_t>(s) - 1];
        HeightResult hr = fgl_height(D.laws[static_cast<std::size_t>(s)], sp.h);
        if (!hr.value || *hr.value != expect)
            return failed("height@stage" + std::to_string(s) + ": expected " +
                          std::to_string(expect) + ", measured " + hr.str());
    }
    return rep;
}

ClassifyingMap classify(const StagedDeformation& D) {
    check_deformation_shape(D);
    const StagedRing& R = D.ring;
    const auto& sp = R.spec();
    int h = sp.h;
    int n = static_cast<int>(D.heights.size());
    auto p = static_cast<int>(sp.coeff.p());

    {
        HeightResult hr = fgl_height(D.laws[0], h);
        if (!hr.value || *hr.value != h)
            fail("HeightMismatch", "stage 0: expected height " + std::to_string(h) +
                                       ", measured " + hr.str());
    }

    Fgl G = hazewinkel_deformation(R);
    const Fgl& F0 = D.laws[0];
    TruncSeries1 gps = p_series(G, p);

    // unit-pivot certificates for the parameter steps: the versal p-series
    // coefficient at order p^t is u_t plus lower-ideal terms, so its
    // derivative in the u_t direction is a unit
    std::vector<bool> ypivot(static_cast<std::size_t>(h), false);
    for (int t = 1; t < h; ++t)
        ypivot[static_cast<std::size_t>(t)] = check_lt_coordinate(G, t).pass;

    ClassifyingMap out;
    StagedMap f = identity_map(R, 0);
    TruncSeries1 phi = TruncSeries1::identity(R, 0);

    int cap = static_cast<int>(sp.coeff.a()) + (h - 1) * sp.prof.D + sp.prof.M + 8;
    int last_depth = -1;
    bool done = false;
    for (int iter = 0; iter < cap && !done; ++iter) {
        Fgl Ghat = fgl_map(f, G);
        Fgl C = conjugate(Ghat, phi);
        if (C == F0) {
            done = true;
            break;
        }
        // the defect must sink strictly deeper into the maximal-ideal
        // filtration on every pass, or the solve has no solution
        int depth = defect_depth(C, F0, h);
        if (depth <= last_depth)
            fail("NonLiftable",
                 "stage 0: the order-by-order solve stalled at ideal depth " +
                     std::to_string(depth));
        last_depth = depth;

        // parameter corrections, read off the p-series coordinates in
        // ascending order so each extraction only depends on settled ones
        Fgl T = conjugate(F0, comp_inverse(phi));
        TruncSeries1 tps = p_series(T, p);
        for (int t = 1; t < h; ++t) {
            int pt = static_cast<int>(ipow(p, t));
            StagedElement target = tps.coeff(pt);
            StagedElement cur = apply_staged_map(f, gps.coeff(pt));
            if (!(target == cur)) {
                f.images[static_cast<std::size_t>(t) - 1] =
                    f.images[static_cast<std::size_t>(t) - 1] + (target - cur);
                out.steps.push_back({pt, 'y', ypivot[static_cast<std::size_t>(t)]});
            }
        }

        // isomorphism corrections, degree by degree against the updated law;
        // at p-power degrees the symmetric cocycle degenerates and the
        // parameter step above owns the direction, so no coefficient is set
        Ghat = fgl_map(f, G);
        TruncSeries1 xi = TruncSeries1::identity(R, 0);
        for (int d = 2; d < F0.xcap(); ++d) {
            int piv = 0;
            for (int i = 1; i < d; ++i)
                if (binom(d, i) % p != 0) {
                    piv = i;
                    break;
                }
            if (piv == 0) continue;
            TruncSeries2 A = eval2_sep(Ghat.series(), xi, xi);
            TruncSeries2 B = compose12(xi, T.series());
            StagedElement delta = A.coeff(piv, d - piv) - B.coeff(piv, d - piv);
            if (delta.is_zero()) continue;
            StagedElement inv = R.from_int(binom(d, piv), 0).try_invert();
            xi.set_coeff(d, delta * inv);
            out.steps.push_back({d, 'b', true});
        }
        phi = compose(xi, phi);
    }
    if (!done)
        fail("NonLiftable", "stage 0: no convergence within the window depth");

    out.f.push_back(f);
    out.phi.push_back(phi);

    for (int s = 1; s <= n; ++s) {
        int want = D.heights[static_cast<std::size_t>(s) - 1];
        HeightResult hr = fgl_height(D.laws[static_cast<std::size_t>(s)], h);
        if (!hr.value || *hr.value != want)
            fail("HeightMismatch", "stage " + std::to_string(s) + ": expected height " +
                                       std::to_string(want) + ", measured " + hr.str());

        StagedMap fs;
        try {
            fs = extend_map(out.f.back(), s, D);
        } catch (const DomainError& e) {
            // after the height gate these can only be window artifacts
            if (e.code() == "MapUndefined")
                fail("PrecisionExhausted",
                     "stage " + std::to_string(s) + ": " + std::string(e.what()));
            if (e.code() == "IdealEscape")
                fail("NonLiftable", "stage " + std::to_string(s) + ": " + std::string(e.what()));
            throw;
        }

        const StagedMap& link = D.connect[static_cast<std::size_t>(s) - 1];
        TruncSeries1 ps(R, s);
        for (int j = 1; j < out.phi.back().xcap(); ++j)
            ps.set_coeff(j, apply_staged_map(link, out.phi.back().coeff(j)));

        Fgl Cs = conjugate(fgl_map(fs, G.at_stage(s)), ps);
        if (!(Cs == D.laws[static_cast<std::size_t>(s)]))
            fail("PrecisionExhausted",
                 "stage " + std::to_string(s) +
                     ": the window cannot reproduce the pushed-forward law exactly");

        out.f.push_back(std::move(fs));
        out.phi.push_back(std::move(ps));
    }
    return out;
}

CoordinateChange change_coordinates(const StagedRing& R,
                                    const std::vector<StagedElement>& v_images) {
    const auto& sp = R.spec();
    int h = sp.h;
    int n = static_cast<int>(sp.heights.size());
    if (static_cast<int>(v_images.size()) != h - 1)
        fail("BadInput", "need one coordinate image per generator u_1..u_" +
                             std::to_string(h - 1));
    for (const auto& v : v_images) {
        if (!(v.ring() == sp))
            fail("MixedRings", "coordinate images must live in the given ring");
        if (v.stage() != 0)
            fail("BadInput", "coordinate images must be stage-0 elements");
        for (int g = 0; g < h; ++g)
            if (v.dens()[static_cast<std::size_t>(g)] != 0)
                fail("BadInput", "coordinate images must be denominator-free");
    }

    StagedMap fwd0{R.spec_ptr(), R.spec_ptr(), v_images, 0};
    Fgl Gv = fgl_map(fwd0, hazewinkel_deformation(R));
    for (int t = 1; t < h; ++t) {
        StagedElement c = v_images[static_cast<std::size_t>(t) - 1] - R.gen(t, 0);
        if (!c.is_zero() && c.ideal_degree(t) < 1)
            fail("NotLubinTate", "image of u_" + std::to_string(t) +
                                     " does not differ from u_" + std::to_string(t) +
                                     " by a lower-ideal element");
        FglReport r = check_lt_coordinate(Gv, t);
        if (!r.pass)
            fail("NotLubinTate",
                 "transported versal law fails the coordinate congruence at t=" +
                     std::to_string(t) + ": " + r.detail);
    }

    // invert the coordinate change by fixed-point iteration: each sweep
    // refines the solution of v(w) = u by one ideal power
    std::vector<StagedElement> w;
    for (int t = 1; t < h; ++t) w.push_back(R.gen(t, 0));
    int cap = static_cast<int>(sp.coeff.a()) + (h - 1) * sp.prof.D + sp.prof.M + 8;
    bool settled = false;
    for (int it = 0; it < cap && !settled; ++it) {
        settled = true;
        for (int t = 1; t < h; ++t) {
            StagedMap B{R.spec_ptr(), R.spec_ptr(), w, 0};
            StagedElement nt =
                R.gen(t, 0) -
                (apply_staged_map(B, v_images[static_cast<std::size_t>(t) - 1]) -
                 w[static_cast<std::size_t>(t) - 1]);
            if (!(nt == w[static_cast<std::size_t>(t) - 1])) {
                w[static_cast<std::size_t>(t) - 1] = std::move(nt);
                settled = false;
            }
        }
    }
    if (!settled)
        fail("PrecisionExhausted", "coordinate inversion did not close within the window");

    CoordinateChange out;
    for (int s = 0; s <= n; ++s) {
        std::vector<StagedElement> vi, wi;
        for (int t = 0; t < h - 1; ++t) {
            vi.push_back(v_images[static_cast<std::size_t>(t)].promote(s));
            wi.push_back(w[static_cast<std::size_t>(t)].promote(s));
        }
        StagedMap fs{R.spec_ptr(), R.spec_ptr(), std::move(vi), s};
        StagedMap bs{R.spec_ptr(), R.spec_ptr(), std::move(wi), s};
        try {
            for (int t = 1; t < h; ++t) {
                StagedElement g = R.gen(t, s);
                if (!(apply_staged_map(bs, fs.images[static_cast<std::size_t>(t) - 1]) == g) ||
                    !(apply_staged_map(fs, bs.images[static_cast<std::size_t>(t) - 1]) == g))
                    fail("PrecisionExhausted",
                         "coordinate change composites are not the identity at stage " +
                             std::to_string(s));
            }
            for (int j = 1; j <= s; ++j) {
                int hj = sp.heights[static_cast<std::size_t>(j) - 1];
                StagedElement gi = R.gen_inv(hj, s);
                if (!(apply_staged_map(bs, apply_staged_map(fs, gi)) == gi) ||
                    !(apply_staged_map(fs, apply_staged_map(bs, gi)) == gi))
                    fail("PrecisionExhausted",
                         "inverted-generator round trip failed at stage " + std::to_string(s));
            }
        } catch (const DomainError& e) {
            if (e.code() == "MapUndefined")
                fail("PrecisionExhausted", "stage " + std::to_string(s) +
                                               ": a coordinate image failed to invert: " +
                                               std::string(e.what()));
            throw;
        }
        out.fwd.push_back(std::move(fs));
        out.inv.push_back(std::move(bs));
    }
    return out;
}

StagedMap extend_map(const StagedMap& f, int s, const StagedDeformation& D) {
    check_deformation_shape(D);
    const auto& sp = D.ring.spec();
    int n = static_cast<int>(D.heights.size());
    if (s < 1 || s > n) fail("BadInput", "extension stage out of range");
    if (f.stage != s - 1) fail("BadInput", "the map to extend must land at stage s-1");
    if (!(*f.target == sp))
        fail("MixedRings", "the map's target is not the deformation's family");
    if (static_cast<int>(f.images.size()) != sp.h - 1)
        fail("BadInput", "the map needs one image per generator");
    int hs = sp.heights[static_cast<std::size_t>(s) - 1];
    const StagedMap& link = D.connect[static_cast<std::size_t>(s) - 1];

    std::vector<StagedElement> imgs;
    for (const auto& x : f.images) imgs.push_back(apply_staged_map(link, x));

    try {
        imgs[static_cast<std::size_t>(hs) - 1].try_invert();
    } catch (const DomainError& e) {
        if (e.code() == "NotAUnit")
            fail("MapUndefined", "image of u_" + std::to_string(hs) +
                                     " is not invertible at stage " + std::to_string(s) +
                                     ": " + std::string(e.what()));
        throw;
    }
    for (int t = 1; t < hs; ++t)
        if (imgs[static_cast<std::size_t>(t) - 1].ideal_degree(hs) < 1)
            fail("IdealEscape", "image of u_" + std::to_string(t) + " escapes the stage-" +
                                    std::to_string(s) + " ideal");

    return StagedMap{f.source, D.ring.spec_ptr(), std::move(imgs), s};
}

// ---------------------------------------------------------------------------
// wire format

namespace {

std::int64_t get_i64(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j[key].is_number_integer())
        fail("UnknownFormat", std::string("missing integer field '") + key + "'");
    return j[key].get<std::int64_t>();
}

} // namespace

Json staged_map_to_json(const StagedMap& m) {
    Json out = Json::object();
    out["stage"] = m.stage;
    out["images"] = Json::array();
    for (const auto& x : m.images) out["images"].push_back(staged_to_json(x));
    return out;
}

StagedMap staged_map_from_json(const StagedRing& src, const StagedRing& dst,
                               const Json& j) {
    if (!j.is_object() || !j.contains("images") || !j["images"].is_array())
        fail("UnknownFormat", "staged map needs an images array");
    int stage = static_cast<int>(get_i64(j, "stage"));
    if (j["images"].size() != static_cast<std::size_t>(src.spec().h - 1))
        fail("UnknownFormat", "staged map needs one image per generator");
    std::vector<StagedElement> imgs;
    for (const auto& e : j["images"]) {
        StagedElement x = staged_from_json(dst, e);
        if (x.stage() != stage)
            fail("UnknownFormat", "map image stage disagrees with the map's stage");
        imgs.push_back(std::move(x));
    }
    return StagedMap{src.spec_ptr(), dst.spec_ptr(), std::move(imgs), stage};
}

Json deformation_to_json(const StagedDeformation& D) {
    const auto& sp = D.ring.spec();
    Json out = Json::object();
    out["rings"] = Json::array();
    int n = static_cast<int>(D.heights.size());
    for (int s = 0; s <= n; ++s) {
        Json entry = Json::object();
        entry["spec"] = staged_spec_to_json(sp);
        entry["stage"] = s;
        out["rings"].push_back(std::move(entry));
    }
    out["maps"] = Json::array();
    for (const auto& m : D.connect) out["maps"].push_back(staged_map_to_json(m));
    out["fgls"] = Json::array();
    for (const auto& F : D.laws) out["fgls"].push_back(series2_to_json(F.series()));
    out["residue"] = Json::object();
    out["residue"]["p"] = static_cast<std::int64_t>(sp.coeff.p());
    out["residue"]["n"] = static_cast<std::int64_t>(sp.coeff.n());
    out["heights"] = Json::array();
    for (int hv : D.heights) out["heights"].push_back(hv);
    return out;
}

StagedDeformation deformation_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("rings") || !j["rings"].is_array() ||
        j["rings"].empty())
        fail("UnknownFormat", "deformation bundle needs a nonempty rings array");
    for (const char* key : {"maps", "fgls", "heights"})
        if (!j.contains(key) || !j[key].is_array())
            fail("UnknownFormat", std::string("deformation bundle needs a '") + key + "' array");
    if (!j.contains("residue") || !j["residue"].is_object())
        fail("UnknownFormat", "deformation bundle needs a residue descriptor");

    std::optional<StagedRing> R;
    int idx = 0;
    for (const auto& entry : j["rings"]) {
        if (!entry.is_object() || !entry.contains("spec"))
            fail("UnknownFormat", "each ring handle needs a spec");
        if (get_i64(entry, "stage") != idx)
            fail("UnknownFormat", "ring handles must be listed by ascending stage");
        StagedRing cur = staged_ring_from_json(entry["spec"]);
        if (!R)
            R.emplace(std::move(cur));
        else if (!(cur.spec() == R->spec()))
            fail("UnknownFormat", "ring handles disagree on the staged family");
        ++idx;
    }
    int n = idx - 1;
    if (static_cast<int>(R->spec().heights.size()) != n)
        fail("UnknownFormat", "ring handle count disagrees with the family's stage count");

    if (get_i64(j["residue"], "p") != R->spec().coeff.p() ||
        get_i64(j["residue"], "n") != R->spec().coeff.n())
        fail("UnknownFormat", "residue descriptor disagrees with the coefficient ring");

    std::vector<int> heights;
    for (const auto& hv : j["heights"]) {
        if (!hv.is_number_integer())
            fail("UnknownFormat", "heights entries must be integers");
        heights.push_back(hv.get<int>());
    }
    if (static_cast<int>(heights.size()) != n)
        fail("UnknownFormat", "heights list length disagrees with the stage count");

    if (static_cast<int>(j["maps"].size()) != n)
        fail("UnknownFormat", "need one connecting map per localized stage");
    std::vector<StagedMap> connect;
    for (int s = 1; s <= n; ++s) {
        StagedMap m = staged_map_from_json(*R, *R, j["maps"][static_cast<std::size_t>(s) - 1]);
        if (m.stage != s)
            fail("UnknownFormat", "connecting map at position " + std::to_string(s - 1) +
                                      " has the wrong stage");
        connect.push_back(std::move(m));
    }

    if (static_cast<int>(j["fgls"].size()) != n + 1)
        fail("UnknownFormat", "need one law per stage 0..n");
    std::vector<Fgl> laws;
    for (int s = 0; s <= n; ++s) {
        Fgl F(series2_from_json(*R, j["fgls"][static_cast<std::size_t>(s)]));
        if (F.stage() != s)
            fail("UnknownFormat", "law at position " + std::to_string(s) +
                                      " has the wrong stage");
        laws.push_back(std::move(F));
    }

    return StagedDeformation{std::move(*R), std::move(heights), std::move(connect),
                             std::move(laws)};
}

Json classifying_to_json(const ClassifyingMap& C) {
    Json out = Json::object();
    out["f"] = Json::array();
    for (const auto& m : C.f) out["f"].push_back(staged_map_to_json(m));
    out["phi"] = Json::array();
    for (const auto& s : C.phi) out["phi"].push_back(series1_to_json(s));
    out["steps"] = Json::array();
    for (const auto& st : C.steps) {
        Json sj = Json::object();
        sj["degree"] = st.degree;
        sj["kind"] = std::string(1, st.kind);
        sj["unit_pivot"] = st.unit_pivot;
        out["steps"].push_back(sj);
    }
    return out;
}

} // namespace lt
