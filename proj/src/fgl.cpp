#include "stagedlt/fgl.hpp"

#include <sstream>

namespace lt {

namespace {

bool staged_is_unit(const StagedElement& x) {
    if (x.is_zero()) return false;
    try {
        (void)x.try_invert();
        return true;
    } catch (const DomainError& err) {
        if (err.code() == "NotAUnit") return false;
        throw;
    }
}

// index of the ideal of definition at the element's stage: the maximal ideal
// I_h at stage 0, I_{h_s} after the stage-s localization
int stage_ideal_index(const Fgl& F) {
    if (F.stage() == 0) return F.ring().spec().h;
    return F.ring().spec().heights[static_cast<std::size_t>(F.stage() - 1)];
}

} // namespace

FglReport fgl_validate(const Fgl& Fg) {
    const TruncSeries2& F = Fg.series();
    const StagedRing& R = Fg.ring();
    int nx = F.xcap();
    int stage = Fg.stage();
    for (int i = 0; i < nx; ++i) {
        const StagedElement& c = F.coeff(i, 0);
        bool ok = (i == 1) ? c == R.one(stage) : c.is_zero();
        if (!ok)
            return {false, "F(x,0) != x at degree " + std::to_string(i)};
    }
    for (int j = 0; j < nx; ++j) {
        const StagedElement& c = F.coeff(0, j);
        bool ok = (j == 1) ? c == R.one(stage) : c.is_zero();
        if (!ok)
            return {false, "F(0,y) != y at degree " + std::to_string(j)};
    }
    for (int i = 0; i < nx; ++i)
        for (int j = i + 1; i + j < nx; ++j)
            if (F.coeff(i, j) != F.coeff(j, i))
                return {false, "commutativity fails at x^" + std::to_string(i) + "y^" +
                                   std::to_string(j)};
    // Associativity via slices: F(F(x,y),z) collected by z-degree and
    // F(x,F(y,z)) by x-degree.  Both use powers of the same coefficient
    // grid, read in (x,y) or (y,z) variables.
    std::vector<TruncSeries2> pow;
    pow.emplace_back(R, stage);
    pow[0].set_coeff(0, 0, R.one(stage));
    auto pow_at = [&](int k) -> const TruncSeries2& {
        while (static_cast<int>(pow.size()) <= k) pow.push_back(pow.back() * F);
        return pow[static_cast<std::size_t>(k)];
    };
    std::vector<TruncSeries2> lhs, rhs;
    for (int k = 0; k < nx; ++k) {
        TruncSeries2 lk(R, stage), rk(R, stage);
        for (int m = 0; m + k < nx; ++m) {
            if (!F.coeff(m, k).is_zero()) lk = lk + pow_at(m).scale(F.coeff(m, k));
            if (!F.coeff(k, m).is_zero()) rk = rk + pow_at(m).scale(F.coeff(k, m));
        }
        lhs.push_back(std::move(lk));
        rhs.push_back(std::move(rk));
    }
    for (int a = 0; a < nx; ++a)
        for (int b = 0; a + b < nx; ++b)
            for (int c = 0; a + b + c < nx; ++c)
                if (lhs[static_cast<std::size_t>(c)].coeff(a, b) !=
                    rhs[static_cast<std::size_t>(a)].coeff(b, c))
                    return {false, "associativity fails at x^" + std::to_string(a) + "y^" +
                                       std::to_string(b) + "z^" + std::to_string(c)};
    return {};
}

Fgl fgl_additive(const StagedRing& R, int stage) {
    TruncSeries2 F(R, stage);
    F.set_coeff(1, 0, R.one(stage));
    F.set_coeff(0, 1, R.one(stage));
    return Fgl(std::move(F));
}

Fgl fgl_multiplicative(const StagedRing& R, int stage) {
    TruncSeries2 F(R, stage);
    F.set_coeff(1, 0, R.one(stage));
    F.set_coeff(0, 1, R.one(stage));
    if (F.xcap() > 2) F.set_coeff(1, 1, R.one(stage));
    return Fgl(std::move(F));
}

TruncSeries1 p_series(const Fgl& F, int k) {
    if (k < 1)
        fail("BadInput", "multiplication index must be >= 1");
    TruncSeries1 x = TruncSeries1::identity(F.ring(), F.stage());
    TruncSeries1 r = x;
    for (int i = 2; i <= k; ++i) r = eval2(F.series(), r, x);
    return r;
}

HeightResult fgl_height(const Fgl& F, int t_max) {
    if (t_max < 0)
        fail("BadInput", "height bound must be >= 0");
    std::int64_t p = F.ring().spec().coeff.p();
    std::int64_t pt_max = 1;
    for (int t = 0; t < t_max; ++t) {
        pt_max *= p;
        if (pt_max >= F.xcap())
            fail("PrecisionExhausted",
                 "window degree " + std::to_string(F.xcap()) +
                     " cannot see the order-p^" + std::to_string(t_max) + " coefficient");
    }
    int tI = stage_ideal_index(F);
    TruncSeries1 ps = p_series(F, static_cast<int>(p));
    HeightResult res;
    res.bound = t_max;
    std::int64_t pt = 1;
    std::int64_t checked = 0;   // a_i verified inside the ideal for all i <= checked
    for (int t = 0; t <= t_max; ++t) {
        for (std::int64_t i = checked + 1; i < pt; ++i)
            if (ps.coeff(static_cast<int>(i)).ideal_degree(tI) < 1)
                return res;   // a_i escapes the ideal: no larger t can qualify
        checked = std::max(checked, pt - 1);
        const StagedElement& apt = ps.coeff(static_cast<int>(pt));
        if (staged_is_unit(apt.mod_ideal(tI))) {
            res.value = t;
            return res;
        }
        if (apt.ideal_degree(tI) < 1)
            return res;
        checked = pt;
        pt *= p;
    }
    return res;
}

FglReport check_star(const Fgl& F, int t, int n) {
    if (t < 0 || t > F.ring().spec().h)
        fail("BadInput", "ideal index out of [0, h]");
    if (n < 1 || n >= F.xcap())
        fail("BadInput", "target order outside the window");
    TruncSeries1 ps = p_series(F, static_cast<int>(F.ring().spec().coeff.p()));
    for (int i = 1; i < n; ++i)
        if (ps.coeff(i).ideal_degree(t) < 1)
            return {false, "a_" + std::to_string(i) + " lies outside the stage-" +
                               std::to_string(t) + " ideal"};
    if (!staged_is_unit(ps.coeff(n)))
        return {false, "a_" + std::to_string(n) + " is not a unit"};
    return {};
}

FglReport check_lt_coordinate(const Fgl& F, int t) {
    const StagedRing& R = F.ring();
    if (t < 1 || t >= R.spec().h)
        fail("BadInput", "coordinate index must satisfy 1 <= t < h");
    std::int64_t p = R.spec().coeff.p();
    std::int64_t pt = 1;
    for (int i = 0; i < t; ++i) pt *= p;
    if (pt >= F.xcap())
        fail("PrecisionExhausted",
             "window degree " + std::to_string(F.xcap()) + " cannot see x^p^" +
                 std::to_string(t));
    TruncSeries1 ps = p_series(F, static_cast<int>(p));
    for (std::int64_t d = 1; d < pt; ++d)
        if (ps.coeff(static_cast<int>(d)).ideal_degree(t) < 1)
            return {false, "a_" + std::to_string(d) + " lies outside (p, u_1..u_" +
                               std::to_string(t - 1) + ")"};
    StagedElement diff = ps.coeff(static_cast<int>(pt)) - R.gen(t, F.stage());
    if (diff.ideal_degree(t) < 1)
        return {false, "x^" + std::to_string(pt) + " coefficient is not u" +
                           std::to_string(t) + " mod the flag ideal"};
    return {};
}

Fgl conjugate(const Fgl& F, const TruncSeries1& phi) {
    if (!phi.substitutable())
        fail("BadInput", "conjugator must have zero constant term");
    TruncSeries1 phinv = comp_inverse(phi);   // NotAUnit on a non-invertible leading term
    TruncSeries2 inner = eval2_sep(F.series(), phi, phi);
    return Fgl(compose12(phinv, inner));
}

Fgl fgl_map(const StagedMap& m, const Fgl& F) {
    if (m.source->prof.Nx != m.target->prof.Nx)
        fail("BadInput", "source and target series windows disagree");
    StagedRing T(m.target->coeff, m.target->h, m.target->heights, m.target->prof);
    TruncSeries2 G(T, m.stage);
    int nx = G.xcap();
    for (int i = 0; i < nx; ++i)
        for (int j = 0; i + j < nx; ++j)
            if (!F.series().coeff(i, j).is_zero())
                G.set_coeff(i, j, apply_staged_map(m, F.series().coeff(i, j)));
    return Fgl(std::move(G));
}

} // namespace lt
