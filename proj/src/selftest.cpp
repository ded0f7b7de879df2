#include "stagedlt/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stagedlt/fgl.hpp"
#include "stagedlt/goldens.hpp"
#include "stagedlt/moduli.hpp"
#include "stagedlt/portrait.hpp"
#include "stagedlt/series.hpp"
#include "stagedlt/staged.hpp"
#include "stagedlt/tower.hpp"

namespace lt {
namespace {

// first failure wins; later checks still run but cannot overwrite it
struct Ctx {
    bool pass = true;
    std::string detail;
    void fail(std::string msg) {
        if (pass) {
            pass = false;
            detail = std::move(msg);
        }
    }
    void check(bool ok, const std::string& msg) {
        if (!ok) fail(msg);
    }
};

// ---------------------------------------------------------------------------
// shared fixtures
// ---------------------------------------------------------------------------

TruncationProfile prof(int D, int M, std::vector<int> N, int Nx) {
    TruncationProfile p;
    p.D = D;
    p.M = M;
    p.Nx = Nx;
    p.N = std::move(N);
    return p;
}

// one-variable window over Z/p^a: exponent caps inert, every identity honest
StagedRing ring1(int p, int a, int Nx) {
    return StagedRing(GaloisRing(p, a, 1), 1, {}, prof(4, 4, {}, Nx));
}

StagedRing ring1n(int p, int a, int n, int Nx) {
    return StagedRing(GaloisRing(p, a, n), 1, {}, prof(4, 4, {}, Nx));
}

// completion caps loose enough that denominator-free elements never cull
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

int ipow(int b, int e) {
    int r = 1;
    while (e-- > 0) r *= b;
    return r;
}

bool is_ppow(int d, int p) {
    while (d % p == 0) d /= p;
    return d == 1;
}

Int obinom(int n, int k) {
    Int r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// ---------------------------------------------------------------------------
// random generators (fixed seeds at every use site)
// ---------------------------------------------------------------------------

GrElement rnd_gr_unit(const GaloisRing& G, std::mt19937& g) {
    std::uniform_int_distribution<int> d(1, 1000);
    GrElement x = G.zero();
    do {
        std::vector<Int> co(static_cast<std::size_t>(G.n()));
        for (auto& c : co) c = d(g) % 7;
        x = G.make(co);
    } while (!x.is_unit());
    return x;
}

StagedElement rnd_coeff(const StagedRing& R, int stage, std::mt19937& g) {
    const auto& sp = R.spec();
    std::uniform_int_distribution<int> cd(0, 4), ed(0, 1);
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

// substitutable series: unit linear term, tame higher coefficients
TruncSeries1 rnd_phi(const StagedRing& R, int stage, std::mt19937& g) {
    TruncSeries1 f(R, stage);
    f.set_coeff(1, R.from_coeff(rnd_gr_unit(R.spec().coeff, g), stage));
    for (int i = 2; i < f.xcap(); ++i) f.set_coeff(i, rnd_coeff(R, stage, g));
    return f;
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

// conjugator in the solver's gauge: linear coefficient one, maximal-ideal
// coefficients away from the degenerate p-power degrees
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
        if (g() % 2)
            x = x * R.gen_inv(R.spec().heights[static_cast<std::size_t>(j) - 1], s);
    return x;
}

StagedElement rnd_window_elem(const StagedRing& R, int stage, std::mt19937& g,
                              int nmons, int emax, int denmax) {
    const auto& s = R.spec();
    std::uniform_int_distribution<int> dm(1, nmons), de(0, emax), dd(0, denmax);
    std::uniform_int_distribution<std::int64_t> dc(
        0, s.coeff.spec().pa.convert_to<std::int64_t>() - 1);
    std::vector<int> den(static_cast<std::size_t>(s.h), 0);
    for (int i = 1; i < s.h; ++i)
        if (s.inverted_by(i, stage)) den[static_cast<std::size_t>(i)] = dd(g);
    std::map<std::vector<int>, GrElement> terms;
    int k = dm(g);
    for (int i = 0; i < k; ++i) {
        std::vector<int> e(static_cast<std::size_t>(s.h - 1));
        for (auto& v : e) v = de(g);
        GrElement c = s.coeff.from_int(dc(g));
        if (c.is_zero()) continue;
        auto it = terms.find(e);
        if (it == terms.end())
            terms.emplace(std::move(e), std::move(c));
        else
            it->second = it->second + c;
    }
    return R.make(stage, std::move(terms), std::move(den));
}

// unit = monomial along the inverted directions times 1 + p*(small), so the
// geometric tail dies p-adically
StagedElement rnd_window_unit(const StagedRing& R, int stage, std::mt19937& g) {
    const auto& s = R.spec();
    std::uniform_int_distribution<std::int64_t> dc(
        0, s.coeff.spec().pa.convert_to<std::int64_t>() - 1);
    std::uniform_int_distribution<int> dk(-2, 2);
    GrElement c0 = s.coeff.from_int(dc(g));
    while (!c0.is_unit()) c0 = s.coeff.from_int(dc(g));
    std::vector<int> e(static_cast<std::size_t>(s.h - 1), 0);
    std::vector<int> den(static_cast<std::size_t>(s.h), 0);
    for (int i = 1; i < s.h; ++i) {
        if (!s.inverted_by(i, stage)) continue;
        int k = dk(g);
        if (k >= 0)
            e[static_cast<std::size_t>(i) - 1] = k;
        else
            den[static_cast<std::size_t>(i)] = -k;
    }
    std::map<std::vector<int>, GrElement> terms;
    terms.emplace(std::move(e), c0);
    StagedElement m0 = R.make(stage, std::move(terms), std::move(den));
    StagedElement r = rnd_window_elem(R, stage, g, 2, 2, 0);
    return m0 + R.p_elem(stage) * r;
}

// ---------------------------------------------------------------------------
// finite-ring tower fixtures
// ---------------------------------------------------------------------------

GaloisRing gr(int p, int a, int n) { return GaloisRing(p, a, n); }

RingMap matrix_map(std::vector<std::vector<Int>> M, std::vector<Int> tmods,
                   int cols) {
    RingMap f;
    f.M = std::move(M);
    f.tmods = std::move(tmods);
    f.cols = cols;
    return f;
}

RingMap reduce_map(const FiniteRingObj& src, const FiniteRingObj& dst) {
    return matrix_map({{1}}, dst.mods, src.dim());
}

// {Z/m0, Z/m1, ...} with reduction transition maps; moduli divide upward
PipeDiagram mod_chain(const std::vector<Int>& mods) {
    std::vector<FiniteRingObj> obs;
    for (const Int& m : mods) {
        FiniteRingObj A;
        A.name = "Z/" + m.str();
        A.mods = {m};
        A.sc = {{{0, 0}, {{0, 1}}}};
        A.unit = {1};
        obs.push_back(std::move(A));
    }
    std::vector<RingMap> pro;
    for (std::size_t k = 0; k + 1 < obs.size(); ++k)
        pro.push_back(reduce_map(obs[k + 1], obs[k]));
    return chain_diagram(std::move(obs), std::move(pro));
}

// ---------------------------------------------------------------------------
// cached law family shared by the first three criteria
// ---------------------------------------------------------------------------

struct LawFix {
    std::string label;
    int p, h;
    StagedRing ring;
    Fgl law;
};

struct LawSet {
    std::vector<LawFix> mult, honda, haz;
};

LawSet build_laws() {
    LawSet L;
    for (auto [p, a] : {std::pair<int, int>{2, 3}, {3, 2}}) {
        StagedRing R = ring1(p, a, p + 2);
        L.mult.push_back({"multiplicative p=" + std::to_string(p), p, 1, R,
                          fgl_multiplicative(R, 0)});
    }
    for (auto [p, h] : {std::pair<int, int>{2, 1}, {3, 1}, {2, 2}, {3, 2}}) {
        StagedRing R = ring1n(p, 1, h, ipow(p, h) + 2);
        L.honda.push_back({"honda h=" + std::to_string(h) + " p=" + std::to_string(p),
                           p, h, R, fgl_honda(R, h)});
    }
    struct HazFix {
        int p, a, h;
        std::vector<int> heights;
        int D;
    };
    for (const HazFix& f : {HazFix{2, 3, 1, {}, 4}, {3, 2, 1, {}, 4},
                            {2, 3, 2, {1}, 8}, {3, 2, 2, {1}, 8},
                            {2, 2, 3, {2}, 12}, {3, 2, 3, {2}, 14}}) {
        StagedRing R = deform_ring(f.p, f.a, f.h, f.heights, f.D, ipow(f.p, f.h) + 2);
        L.haz.push_back({"hazewinkel h=" + std::to_string(f.h) + " p=" + std::to_string(f.p),
                         f.p, f.h, R, hazewinkel_deformation(R)});
    }
    return L;
}

const LawSet& laws() {
    static LawSet L = build_laws();
    return L;
}

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

// law validation across the whole family, exact and under a wall-clock budget
void c1_axioms(Ctx& c) {
    auto t0 = std::chrono::steady_clock::now();
    for (const auto& group : {&LawSet::mult, &LawSet::honda, &LawSet::haz})
        for (const LawFix& f : laws().*group) {
            FglReport rep = fgl_validate(f.law);
            c.check(rep.pass, f.label + ": " + rep.detail);
        }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.check(secs < 60.0, "validation exceeded the 60 s budget");
}

// multiplication-by-p closed forms: binomial, Frobenius, and prime-power laws
void c2_pseries(Ctx& c) {
    for (const LawFix& f : laws().mult) {
        TruncSeries1 ps = p_series(f.law, f.p);
        for (int d = 1; d < ps.xcap(); ++d)
            c.check(ps.coeff(d) == f.ring.from_int(obinom(f.p, d), 0),
                    f.label + ": [p](x) coefficient at degree " + std::to_string(d));
    }
    for (int p : {2, 3}) {
        StagedRing R = ring1(p, 1, p + 2);
        TruncSeries1 ps = p_series(fgl_multiplicative(R, 0), p);
        for (int d = 1; d < ps.xcap(); ++d) {
            StagedElement want = (d == p) ? R.one(0) : R.zero(0);
            c.check(ps.coeff(d) == want,
                    "multiplicative over F_" + std::to_string(p) +
                        ": [p](x) coefficient at degree " + std::to_string(d));
        }
    }
    for (const LawFix& f : laws().honda) {
        TruncSeries1 ps = p_series(f.law, f.p);
        int ph = ipow(f.p, f.h);
        for (int d = 1; d < ps.xcap(); ++d) {
            StagedElement want = (d == ph) ? f.ring.one(0) : f.ring.zero(0);
            c.check(ps.coeff(d) == want,
                    f.label + ": [p](x) coefficient at degree " + std::to_string(d));
        }
    }
}

// distinguished-coordinate congruences at every intermediate index
void c3_coordinates(Ctx& c) {
    for (const LawFix& f : laws().haz) {
        for (int t = 1; t < f.h; ++t) {
            FglReport rep = check_lt_coordinate(f.law, t);
            c.check(rep.pass, f.label + " t=" + std::to_string(t) + ": " + rep.detail);
        }
    }
}

// star shapes survive 100 random invertible substitutions per sample ring
void c4_star(Ctx& c) {
    std::mt19937 g(5507);
    struct Sample {
        StagedRing R;
        Fgl F;
        int t, n, stage;
    };
    StagedRing S1 = deform_ring(2, 2, 2, {1}, 20, 6);
    StagedRing S2 = deform_ring(3, 2, 2, {1}, 20, 6);
    StagedRing S3 = deform_ring(2, 2, 3, {2}, 20, 6);
    StagedRing S4 = deform_ring(2, 3, 2, {1}, 20, 6);
    std::vector<Sample> samples;
    samples.push_back({S1, fgl_multiplicative(S1, 1), 1, 2, 1});
    samples.push_back({S2, fgl_multiplicative(S2, 1), 1, 3, 1});
    samples.push_back({S3, fgl_multiplicative(S3, 1), 2, 2, 1});
    samples.push_back({S4, hazewinkel_deformation(S4).at_stage(1), 1, 2, 1});
    int si = 0;
    for (auto& s : samples) {
        ++si;
        c.check(check_star(s.F, s.t, s.n).pass,
                "sample " + std::to_string(si) + ": base law lost its star shape");
        for (int trial = 0; trial < 100; ++trial) {
            TruncSeries1 phi = rnd_phi(s.R, s.stage, g);
            Fgl cj = conjugate(s.F, phi);
            c.check(check_star(cj, s.t, s.n).pass,
                    "sample " + std::to_string(si) + " trial " + std::to_string(trial));
        }
    }
}

// measured height is unchanged by 100 random conjugations per law
void c5_height(Ctx& c) {
    std::mt19937 g(7741);
    struct Sample {
        std::string label;
        StagedRing R;
        Fgl F;
        int stage, expect;
    };
    StagedRing F2 = ring1n(2, 1, 1, 6);
    StagedRing F4 = ring1n(2, 1, 2, 6);
    StagedRing D = deform_ring(2, 3, 2, {1}, 20, 6);
    std::vector<Sample> samples;
    samples.push_back({"height-1 law", F2, fgl_honda(F2, 1), 0, 1});
    samples.push_back({"height-2 law", F4, fgl_honda(F4, 2), 0, 2});
    samples.push_back({"stage-1 pullback", D, hazewinkel_deformation(D).at_stage(1), 1, 1});
    for (auto& s : samples)
        for (int trial = 0; trial < 100; ++trial) {
            HeightResult h = fgl_height(conjugate(s.F, rnd_phi(s.R, s.stage, g)), 2);
            c.check(h.value.has_value() && *h.value == s.expect,
                    s.label + " trial " + std::to_string(trial) + ": height " + h.str());
        }
}

// twist tail whose inverse terminates inside the window: every coefficient
// carries a factor of p, so geometric tails die at the p-adic depth instead
// of leaning on the completion cull
StagedElement rnd_padic_ideal(const StagedRing& R, int t, std::mt19937& g) {
    StagedElement out = R.p_elem(0) * rnd_small(R, 0, g);
    for (int s = 1; s < t; ++s)
        if (g() % 2) out = out + R.gen(s, 0) * R.p_elem(0) * rnd_small(R, 0, g);
    return out;
}

// both composites of a random coordinate change are the identity pointwise
void c6_change(Ctx& c) {
    struct Fix {
        int p, a, h;
        std::vector<int> heights;
        int D, Nx;
        unsigned seed;
    };
    for (const Fix& f : {Fix{2, 3, 2, {1}, 12, 6, 211}, {2, 2, 3, {2, 1}, 12, 10, 212}}) {
        StagedRing R = deform_ring(f.p, f.a, f.h, f.heights, f.D, f.Nx);
        std::mt19937 g(f.seed);
        std::vector<StagedElement> v;
        for (int t = 1; t < R.spec().h; ++t)
            v.push_back(R.gen(t, 0) + rnd_padic_ideal(R, t, g));
        CoordinateChange CC = change_coordinates(R, v);
        int stages = static_cast<int>(CC.fwd.size());
        for (int i = 0; i < 100; ++i) {
            int s = i % stages;
            StagedElement x = rnd_elem_at(R, s, g);
            auto su = static_cast<std::size_t>(s);
            bool ok = apply_staged_map(CC.inv[su], apply_staged_map(CC.fwd[su], x)) == x &&
                      apply_staged_map(CC.fwd[su], apply_staged_map(CC.inv[su], x)) == x;
            c.check(ok, "h=" + std::to_string(f.h) + " element " + std::to_string(i) +
                            " at stage " + std::to_string(s));
        }
    }
}

// the classifying solver returns identity data on the canonical bundle and
// recovers 20 planted twist/conjugator pairs exactly, every pivot a unit
void c7_classify(Ctx& c) {
    {
        StagedRing R = deform_ring(2, 3, 2, {1}, 8, 6);
        ClassifyingMap C = classify(tautological_deformation(R));
        for (int s = 0; s < 2; ++s) {
            auto su = static_cast<std::size_t>(s);
            c.check(staged_map_equal(C.f[su], identity_map(R, s)),
                    "canonical bundle: stage " + std::to_string(s) + " map is not the identity");
            c.check(C.phi[su] == TruncSeries1::identity(R, s),
                    "canonical bundle: stage " + std::to_string(s) + " conjugator is not the identity");
        }
        c.check(C.steps.empty(), "canonical bundle: solver took nontrivial steps");
    }
    struct Fix {
        int p, a, h;
        std::vector<int> heights;
        int D, Nx, trials;
        unsigned seed;
    };
    int recovered = 0;
    for (const Fix& f : {Fix{2, 3, 2, {1}, 8, 6, 8, 101}, {3, 2, 2, {1}, 8, 11, 8, 202},
                         {2, 2, 3, {2, 1}, 12, 10, 4, 909}}) {
        StagedRing R = deform_ring(f.p, f.a, f.h, f.heights, f.D, f.Nx);
        std::mt19937 g(f.seed);
        for (int trial = 0; trial < f.trials; ++trial) {
            StagedMap tw = identity_map(R, 0);
            auto v = rnd_twist(R, g);
            tw.images = v;
            TruncSeries1 phi = rnd_gauge_phi(R, g);
            ClassifyingMap C = classify(induced_deformation(R, tw, phi));
            std::string at = "p=" + std::to_string(f.p) + " h=" + std::to_string(f.h) +
                             " trial " + std::to_string(trial);
            for (std::size_t i = 0; i < v.size(); ++i)
                c.check(C.f[0].images[i] == v[i], at + ": twist image " + std::to_string(i));
            c.check(C.phi[0] == phi, at + ": conjugator");
            for (const SolveStep& st : C.steps)
                c.check(st.unit_pivot, at + ": non-unit pivot at degree " +
                                           std::to_string(st.degree));
            ++recovered;
        }
    }
    c.check(recovered == 20, "expected 20 planted fixtures");
}

// inverting u1 + p yields the alternating geometric series exactly
void c8_geometric(Ctx& c) {
    for (auto [p, a] : {std::pair<int, int>{2, 3}, {3, 2}}) {
        StagedRing R = deform_ring(p, a, 2, {1}, 8, p * p + 2);
        StagedElement x = R.gen(1, 1) + R.p_elem(1);
        StagedElement inv = x.try_invert();
        StagedElement expect = R.zero(1);
        int n1 = R.spec().prof.N[0];
        Int pj = 1;
        for (int j = 0; j < n1; ++j) {
            Int co = (j % 2 == 0) ? pj : -pj;
            expect = expect + R.from_int(co, 1) *
                                  R.gen_inv(1, 1).pow(static_cast<std::uint64_t>(1 + j));
            pj *= p;
        }
        std::string at = "p=" + std::to_string(p);
        c.check(inv == expect, at + ": series mismatch");
        c.check(x * inv == R.one(1), at + ": product is not one");
    }
}

// 200 nonzero window elements factor as x^e * unit and reassemble exactly
void c9_weierstrass(Ctx& c) {
    StagedRing R(GaloisRing(2, 1, 1), 3, {2}, prof(8, 64, {8}, 8));
    StagedElement x = R.gen(1, 1);
    std::mt19937 g(47);
    int done = 0, trial = 0;
    while (done < 200) {
        ++trial;
        StagedElement z = rnd_window_elem(R, 1, g, 4, 3, 2);
        if (z.is_zero()) continue;
        auto [ord, unit] = z.weierstrass_split(1);
        c.check(x.pow(static_cast<std::uint64_t>(ord)) * unit == z,
                "element " + std::to_string(trial) + ": reassembly mismatch");
        ++done;
    }
}

// generated ideal portraits, closures, and DOT output match frozen goldens
void c10_portraits(Ctx& c) {
    struct Fix {
        const char* name;
        golden::NodeList nodes;
        golden::EdgeList edges;
    };
    auto node_list = [](const PortraitGraph& G) {
        golden::NodeList out;
        for (const auto& n : G.nodes) out.emplace_back(n.label(), n.level);
        return out;
    };
    auto edge_set = [](const PortraitGraph& G) {
        std::set<std::pair<std::string, std::string>> out;
        for (const auto& [a, b] : G.edges)
            out.emplace(G.nodes[static_cast<std::size_t>(a)].label(),
                        G.nodes[static_cast<std::size_t>(b)].label());
        return out;
    };
    for (const Fix& f : {Fix{"kx", golden::fig1_nodes(), golden::fig1_edges()},
                         {"xkx", golden::fig2_nodes(), {}},
                         {"kxx", golden::fig3_nodes(), golden::fig3_edges()},
                         {"ykxxc", golden::fig5_nodes(), golden::fig5_edges()}}) {
        PortraitGraph G = portrait_example(f.name, 4);
        c.check(node_list(G) == f.nodes, std::string(f.name) + ": node list differs");
        c.check(edge_set(G) == std::set<std::pair<std::string, std::string>>(
                                   f.edges.begin(), f.edges.end()),
                std::string(f.name) + ": edge set differs");
        c.check(export_graph(G, "dot") == export_graph(portrait_example(f.name, 4), "dot"),
                std::string(f.name) + ": DOT output is unstable");
    }
    PortraitGraph G = portrait_example("kxx", 4);
    auto labels_of = [&](const std::vector<int>& idx) {
        std::vector<std::string> out;
        for (int i : idx) out.push_back(G.nodes[static_cast<std::size_t>(i)].label());
        std::sort(out.begin(), out.end());
        return out;
    };
    auto sorted = [](std::vector<std::string> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    c.check(labels_of(closure(G, {{{"y", 3}}})) == sorted(golden::closure_y3()),
            "closure of (y^3) differs");
    c.check(labels_of(closure(G, {{{"x", 3}, {"x+y", 2}, {"y", 1}}})) ==
                sorted(golden::closure_x3s2y()),
            "closure of (x^3 (x+y)^2 y) differs");
    c.check(export_graph(portrait_example("kx", 4), "dot") == golden::fig1_dot(),
            "frozen DOT rendering differs");
}

// the realized quotient map is a bijection while every stage keeps a
// nonzero kernel, across truncation depths 1..6
void c11_clog(Ctx& c) {
    for (int d = 1; d <= 6; ++d) {
        ClogResult r = clog_example(gr(2, 1, 1), d);
        std::string at = "depth " + std::to_string(d);
        c.check(r.realized_bijective, at + ": realized map is not bijective");
        c.check(r.kernel_sizes.size() == static_cast<std::size_t>(d),
                at + ": wrong number of stages");
        for (int n = 1; n <= d && n <= static_cast<int>(r.kernel_sizes.size()); ++n) {
            Int want = Int(1) << (d + 1 - n);
            c.check(r.kernel_sizes[static_cast<std::size_t>(n - 1)] == want,
                    at + ": kernel size at stage " + std::to_string(n));
            c.check(r.kernel_sizes[static_cast<std::size_t>(n - 1)] > 1,
                    at + ": kernel vanishes at stage " + std::to_string(n));
        }
    }
}

// realization commutes with binary products and with level inclusions, and
// the quotient fixtures are exactly the level inclusions of the series tower
void c12_realization(Ctx& c) {
    std::mt19937 rng(123);
    std::uniform_int_distribution<int> pick(0, 3);
    auto sample = [&](int which) -> PipeDiagram {
        switch (which) {
            case 0: return mod_chain({2, 4, 8});
            case 1: return mod_chain({3, 9, 27});
            case 2: return series_tower(gr(2, 1, 1), 3);
            default: return const_diagram(fin_galois(gr(2, 1, 2)), 3);
        }
    };
    int pairs = 0;
    for (int trial = 0; trial < 14; ++trial) {
        PipeDiagram X = sample(pick(rng));
        PipeDiagram Y = sample(pick(rng));
        PipeDiagram P = product_diagram(X, Y);
        for (int d = 1; d <= 3; ++d) {
            FiniteRingObj want = fin_product(realize(X, d).obj, realize(Y, d).obj);
            c.check(realize(P, d).obj.same_as(want),
                    "product pair " + std::to_string(pairs) + " at depth " + std::to_string(d));
        }
        ++pairs;
    }
    for (int trial = 0; trial < 6; ++trial) {
        PipeDiagram X = include_level(sample(pick(rng)), trial % 2);
        PipeDiagram Y = include_level(sample(pick(rng)), (trial + 1) % 2);
        PipeDiagram P = product_diagram(X, Y);
        for (int d = 1; d <= 2; ++d) {
            FiniteRingObj want = fin_product(realize(X, d).obj, realize(Y, d).obj);
            c.check(realize(P, d).obj.same_as(want),
                    "product pair " + std::to_string(pairs) + " at depth " + std::to_string(d));
        }
        ++pairs;
    }
    c.check(pairs == 20, "expected 20 product pairs");

    std::vector<PipeDiagram> samples;
    samples.push_back(const_diagram(fin_zp(2, 1), 4));
    samples.push_back(const_diagram(fin_galois(gr(2, 1, 2)), 3));
    samples.push_back(mod_chain({2, 4, 8}));
    samples.push_back(mod_chain({3, 9, 27, 81}));
    samples.push_back(series_tower(gr(2, 1, 1), 4));
    samples.push_back(series_tower(gr(3, 1, 1), 3));
    int si = 0;
    for (const PipeDiagram& X : samples) {
        ++si;
        for (int m = 0; m <= 1; ++m) {
            PipeDiagram Y = include_level(X, m);
            for (int d = 1; d <= static_cast<int>(X.obs.size()); ++d) {
                Realization rx = realize(X, d);
                Realization ry = realize(Y, d);
                std::string at = "sample " + std::to_string(si) + " level " +
                                 std::to_string(m) + " depth " + std::to_string(d);
                c.check(ry.obj.same_as(rx.obj), at + ": realizations differ");
                c.check(ry.stabilized == rx.stabilized, at + ": stabilization differs");
            }
        }
    }

    ClogResult r = clog_example(gr(2, 1, 1), 4);
    PipeDiagram T = series_tower(gr(2, 1, 1), 5);
    c.check(diagram_equal(r.Q0, include_level(T, 0)), "first quotient fixture differs");
    c.check(diagram_equal(r.Q1, include_level(T, 1)), "second quotient fixture differs");
}

// x * try_invert(x) = 1 for 500 random units across the sample windows
void c13_units(Ctx& c) {
    struct Sample {
        int p, h;
        std::vector<int> heights;
    };
    std::vector<Sample> samples = {{2, 2, {1}}, {3, 2, {1}}, {2, 3, {2}}, {2, 3, {2, 1}}};
    std::mt19937 g(43);
    int done = 0;
    for (const Sample& smp : samples) {
        int a = 2;
        std::vector<int> N(smp.heights.size(), a + (smp.h - 1) * 10);
        StagedRing R(GaloisRing(smp.p, a, 1), smp.h, smp.heights, prof(10, 10, N, 8));
        int stage = R.stages();
        for (int i = 0; i < 125; ++i) {
            StagedElement x = rnd_window_unit(R, stage, g);
            c.check(x * x.try_invert() == R.one(stage),
                    "p=" + std::to_string(smp.p) + " h=" + std::to_string(smp.h) +
                        " trial " + std::to_string(i));
            ++done;
        }
    }
    c.check(done == 500, "expected 500 unit trials");
}

CriterionResult run_one(int id, const char* name, void (*body)(Ctx&)) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    Ctx c;
    try {
        body(c);
    } catch (const DomainError& e) {
        c.fail(std::string("unexpected ") + e.code() + ": " + e.what());
    } catch (const std::exception& e) {
        c.fail(std::string("unexpected error: ") + e.what());
    }
    r.pass = c.pass;
    r.detail = c.detail;
    return r;
}

}  // namespace

std::vector<CriterionResult> run_selftest() {
    std::vector<CriterionResult> out;
    out.push_back(run_one(1, "law validation across the standard family", c1_axioms));
    out.push_back(run_one(2, "multiplication-by-p closed forms", c2_pseries));
    out.push_back(run_one(3, "distinguished coordinate congruences", c3_coordinates));
    out.push_back(run_one(4, "star shape preservation under substitution", c4_star));
    out.push_back(run_one(5, "height invariance under conjugation", c5_height));
    out.push_back(run_one(6, "coordinate changes invert pointwise", c6_change));
    out.push_back(run_one(7, "classifying map round trip", c7_classify));
    out.push_back(run_one(8, "alternating geometric inverse", c8_geometric));
    out.push_back(run_one(9, "weierstrass factorization round trip", c9_weierstrass));
    out.push_back(run_one(10, "portrait golden graphs", c10_portraits));
    out.push_back(run_one(11, "quotient tower realization", c11_clog));
    out.push_back(run_one(12, "realization algebra", c12_realization));
    out.push_back(run_one(13, "unit inversion round trip", c13_units));
    return out;
}

bool print_selftest(std::ostream& os, const std::vector<CriterionResult>& results) {
    int passed = 0;
    for (const CriterionResult& r : results) {
        os << '[' << (r.id < 10 ? " " : "") << r.id << "] "
           << (r.pass ? "pass" : "FAIL") << "  " << r.name;
        if (!r.pass && !r.detail.empty()) os << ": " << r.detail;
        os << '\n';
        if (r.pass) ++passed;
    }
    os << passed << '/' << results.size() << " criteria passed\n";
    return passed == static_cast<int>(results.size());
}

}  // namespace lt
