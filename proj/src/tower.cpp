#include "stagedlt/tower.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "stagedlt/errors.hpp"

namespace lt {

namespace {

constexpr long kEnumGuard = 1 << 18;

Int mod_reduce(Int v, const Int& m) {
    if (m == 1) return 0;
    v %= m;
    if (v < 0) v += m;
    return v;
}

using ScTable = std::vector<
    std::pair<std::pair<int, int>, std::vector<std::pair<int, Int>>>>;

ScTable normalize_sc(ScTable sc, const std::vector<Int>& mods) {
    ScTable out;
    for (auto& [key, terms] : sc) {
        std::map<int, Int> acc;
        for (auto& [k, c] : terms) {
            Int r = mod_reduce(c, mods[static_cast<std::size_t>(k)]);
            if (r != 0) acc[k] += r;
        }
        std::vector<std::pair<int, Int>> clean;
        for (auto& [k, c] : acc) {
            Int r = mod_reduce(c, mods[static_cast<std::size_t>(k)]);
            if (r != 0) clean.emplace_back(k, r);
        }
        if (!clean.empty()) out.emplace_back(key, std::move(clean));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

bool has_unit(const FiniteRingObj& A) {
    return static_cast<int>(A.unit.size()) == A.dim();
}

}  // namespace

// ---------------------------------------------------------------------------
// finite ring objects
// ---------------------------------------------------------------------------

Int FiniteRingObj::size() const {
    if (!subset.empty()) return static_cast<Int>(subset.size());
    Int s = 1;
    for (const Int& m : mods) s *= m;
    return s;
}

Elem FiniteRingObj::zero() const {
    return Elem(static_cast<std::size_t>(dim()), 0);
}

Elem FiniteRingObj::reduce(Elem x) const {
    if (static_cast<int>(x.size()) != dim())
        fail("BadInput", "element has the wrong coordinate count");
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = mod_reduce(x[i], mods[i]);
    return x;
}

Elem FiniteRingObj::add(const Elem& a, const Elem& b) const {
    Elem out = zero();
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = mod_reduce(a[i] + b[i], mods[i]);
    return out;
}

Elem FiniteRingObj::neg(const Elem& a) const {
    Elem out = zero();
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = mod_reduce(-a[i], mods[i]);
    return out;
}

Elem FiniteRingObj::mul(const Elem& a, const Elem& b) const {
    Elem out = zero();
    for (const auto& [key, terms] : sc) {
        const Int& ai = a[static_cast<std::size_t>(key.first)];
        if (ai == 0) continue;
        const Int& bj = b[static_cast<std::size_t>(key.second)];
        if (bj == 0) continue;
        for (const auto& [k, c] : terms) {
            auto ku = static_cast<std::size_t>(k);
            out[ku] = mod_reduce(out[ku] + ai * bj * c, mods[ku]);
        }
    }
    return out;
}

bool FiniteRingObj::contains(const Elem& x) const {
    if (static_cast<int>(x.size()) != dim()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < 0 || x[i] >= mods[i]) return false;
    if (subset.empty()) return true;
    return std::binary_search(subset.begin(), subset.end(), x);
}

std::vector<Elem> FiniteRingObj::carrier() const {
    if (!subset.empty()) return subset;
    if (size() > kEnumGuard) fail("BadInput", "carrier too large to enumerate");
    std::vector<Elem> out;
    Elem cur = zero();
    while (true) {
        out.push_back(cur);
        int i = 0;
        for (; i < dim(); ++i) {
            cur[static_cast<std::size_t>(i)] += 1;
            if (cur[static_cast<std::size_t>(i)] < mods[static_cast<std::size_t>(i)]) break;
            cur[static_cast<std::size_t>(i)] = 0;
        }
        if (i == dim()) break;
    }
    return out;
}

bool FiniteRingObj::same_as(const FiniteRingObj& o) const {
    return mods == o.mods && sc == o.sc && unit == o.unit && subset == o.subset;
}

std::string FiniteRingObj::str() const { return name; }

FiniteRingObj fin_zero() {
    FiniteRingObj A;
    A.name = "0";
    return A;
}

FiniteRingObj fin_zp(int p, int a) {
    if (p < 2 || a < 1) fail("BadInput", "modulus requires p >= 2, a >= 1");
    Int pa = 1;
    for (int i = 0; i < a; ++i) pa *= p;
    FiniteRingObj A;
    std::ostringstream os;
    os << "Z/" << pa;
    A.name = os.str();
    A.mods = {pa};
    A.sc = {{{0, 0}, {{0, 1}}}};
    A.unit = {1};
    return A;
}

FiniteRingObj fin_galois(const GaloisRing& G) {
    int n = G.n();
    FiniteRingObj A;
    A.name = G.spec().describe();
    A.mods.assign(static_cast<std::size_t>(n), G.spec().pa);
    // basis e_i = t^i; products read off from Galois ring arithmetic
    std::vector<GrElement> pw;
    pw.push_back(G.one());
    if (n >= 2) {
        std::vector<Int> tc(static_cast<std::size_t>(n), 0);
        tc[1] = 1;
        GrElement t = G.make(tc);
        for (int k = 1; k <= 2 * n - 2; ++k) pw.push_back(pw.back() * t);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& co = pw[static_cast<std::size_t>(i + j)].coords();
            std::vector<std::pair<int, Int>> terms;
            for (int k = 0; k < n; ++k)
                if (co[static_cast<std::size_t>(k)] != 0)
                    terms.emplace_back(k, co[static_cast<std::size_t>(k)]);
            if (!terms.empty()) A.sc.push_back({{i, j}, std::move(terms)});
        }
    A.sc = normalize_sc(std::move(A.sc), A.mods);
    A.unit = G.one().coords();
    return A;
}

FiniteRingObj fin_trunc_poly(const FiniteRingObj& base, int deg) {
    if (deg < 1) fail("BadInput", "truncation degree must be at least 1");
    if (!base.subset.empty())
        fail("BadInput", "truncated polynomials need a full base carrier");
    int bd = base.dim();
    FiniteRingObj A;
    std::ostringstream os;
    os << base.name << "[x]/x^" << deg;
    A.name = os.str();
    for (int d = 0; d < deg; ++d)
        A.mods.insert(A.mods.end(), base.mods.begin(), base.mods.end());
    for (int xi = 0; xi < deg; ++xi)
        for (int xj = 0; xi + xj < deg; ++xj)
            for (const auto& [key, terms] : base.sc) {
                std::vector<std::pair<int, Int>> shifted;
                for (const auto& [k, c] : terms)
                    shifted.emplace_back(k + (xi + xj) * bd, c);
                A.sc.push_back(
                    {{xi * bd + key.first, xj * bd + key.second}, std::move(shifted)});
            }
    A.sc = normalize_sc(std::move(A.sc), A.mods);
    A.unit = Elem(static_cast<std::size_t>(deg * bd), 0);
    for (int k = 0; k < bd; ++k) A.unit[static_cast<std::size_t>(k)] = base.unit[static_cast<std::size_t>(k)];
    return A;
}

FiniteRingObj fin_product(const FiniteRingObj& A, const FiniteRingObj& B) {
    FiniteRingObj P;
    P.name = "(" + A.name + ") x (" + B.name + ")";
    P.mods = A.mods;
    P.mods.insert(P.mods.end(), B.mods.begin(), B.mods.end());
    int off = A.dim();
    P.sc = A.sc;
    for (const auto& [key, terms] : B.sc) {
        std::vector<std::pair<int, Int>> shifted;
        for (const auto& [k, c] : terms) shifted.emplace_back(k + off, c);
        P.sc.push_back({{key.first + off, key.second + off}, std::move(shifted)});
    }
    P.sc = normalize_sc(std::move(P.sc), P.mods);
    if (has_unit(A) && has_unit(B)) {
        P.unit = A.unit;
        P.unit.insert(P.unit.end(), B.unit.begin(), B.unit.end());
    }
    if (!A.subset.empty() || !B.subset.empty()) {
        std::vector<Elem> ca = A.carrier(), cb = B.carrier();
        if (static_cast<long>(ca.size()) * static_cast<long>(cb.size()) > kEnumGuard)
            fail("BadInput", "carrier too large to enumerate");
        for (const Elem& a : ca)
            for (const Elem& b : cb) {
                Elem e = a;
                e.insert(e.end(), b.begin(), b.end());
                P.subset.push_back(std::move(e));
            }
        std::sort(P.subset.begin(), P.subset.end());
    }
    return P;
}

FiniteRingObj fin_ideal_span(const FiniteRingObj& A, const std::vector<Elem>& gens) {
    std::vector<Elem> seed;
    for (const Elem& g : gens) {
        Elem gr = A.reduce(g);
        for (const Elem& a : A.carrier()) seed.push_back(A.mul(gr, a));
    }
    std::set<Elem> span;
    span.insert(A.zero());
    for (const Elem& s : seed) span.insert(s);
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Elem> cur(span.begin(), span.end());
        for (const Elem& x : cur)
            for (const Elem& s : seed) {
                Elem y = A.add(x, s);
                if (span.insert(std::move(y)).second) grew = true;
            }
    }
    FiniteRingObj I;
    I.name = "ideal in " + A.name;
    I.mods = A.mods;
    I.sc = A.sc;
    I.subset.assign(span.begin(), span.end());
    if (I.subset.size() == A.carrier().size()) {
        I.subset.clear();
        I.unit = A.unit;
        I.name = A.name;
    }
    return I;
}

// ---------------------------------------------------------------------------
// coordinate-linear maps
// ---------------------------------------------------------------------------

RingMap RingMap::identity(const FiniteRingObj& A) {
    RingMap f;
    f.tmods = A.mods;
    f.cols = A.dim();
    f.M.assign(static_cast<std::size_t>(A.dim()),
               std::vector<Int>(static_cast<std::size_t>(A.dim()), 0));
    for (int i = 0; i < A.dim(); ++i) f.M[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    return f;
}

RingMap RingMap::zero_map(const FiniteRingObj& src, const FiniteRingObj& dst) {
    RingMap f;
    f.tmods = dst.mods;
    f.cols = src.dim();
    f.M.assign(static_cast<std::size_t>(dst.dim()),
               std::vector<Int>(static_cast<std::size_t>(src.dim()), 0));
    return f;
}

Elem RingMap::apply(const Elem& x) const {
    if (static_cast<int>(x.size()) != cols)
        fail("BadInput", "map applied to the wrong coordinate count");
    Elem out(tmods.size(), 0);
    for (std::size_t i = 0; i < tmods.size(); ++i) {
        Int s = 0;
        for (std::size_t j = 0; j < x.size(); ++j) s += M[i][j] * x[j];
        out[i] = mod_reduce(s, tmods[i]);
    }
    return out;
}

RingMap RingMap::after(const RingMap& f) const {
    if (cols != static_cast<int>(f.M.size()))
        fail("BadInput", "map composition dimension mismatch");
    RingMap g;
    g.tmods = tmods;
    g.cols = f.cols;
    g.M.assign(M.size(), std::vector<Int>(static_cast<std::size_t>(f.cols), 0));
    for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t j = 0; j < static_cast<std::size_t>(f.cols); ++j) {
            Int s = 0;
            for (std::size_t k = 0; k < f.M.size(); ++k) s += M[i][k] * f.M[k][j];
            g.M[i][j] = mod_reduce(s, tmods[i]);
        }
    return g;
}

bool RingMap::equals(const RingMap& o) const {
    if (tmods != o.tmods || cols != o.cols || M.size() != o.M.size()) return false;
    for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t j = 0; j < M[i].size(); ++j)
            if (mod_reduce(M[i][j], tmods[i]) != mod_reduce(o.M[i][j], tmods[i]))
                return false;
    return true;
}

bool RingMap::is_identity() const {
    if (static_cast<int>(M.size()) != cols) return false;
    for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t j = 0; j < M[i].size(); ++j) {
            Int want = (i == j) ? 1 : 0;
            if (mod_reduce(M[i][j], tmods[i]) != mod_reduce(want, tmods[i]))
                return false;
        }
    return true;
}

bool map_well_defined(const RingMap& f, const FiniteRingObj& src) {
    if (f.cols != src.dim()) return false;
    for (std::size_t j = 0; j < static_cast<std::size_t>(f.cols); ++j)
        for (std::size_t i = 0; i < f.M.size(); ++i)
            if (mod_reduce(f.M[i][j] * src.mods[j], f.tmods[i]) != 0) return false;
    return true;
}

bool is_ring_map(const RingMap& f, const FiniteRingObj& src,
                 const FiniteRingObj& dst) {
    if (!map_well_defined(f, src)) return false;
    if (f.tmods != dst.mods) return false;
    if (has_unit(src) && has_unit(dst) && f.apply(src.unit) != dst.unit)
        return false;
    // multiplicativity on the coordinate basis suffices by bilinearity
    std::vector<Elem> fe;
    for (int i = 0; i < src.dim(); ++i) {
        Elem e = src.zero();
        e[static_cast<std::size_t>(i)] = 1;
        fe.push_back(f.apply(e));
    }
    for (int i = 0; i < src.dim(); ++i)
        for (int j = 0; j < src.dim(); ++j) {
            Elem ei = src.zero(), ej = src.zero();
            ei[static_cast<std::size_t>(i)] = 1;
            ej[static_cast<std::size_t>(j)] = 1;
            Elem lhs = f.apply(src.mul(ei, ej));
            Elem rhs = dst.mul(fe[static_cast<std::size_t>(i)], fe[static_cast<std::size_t>(j)]);
            if (lhs != rhs) return false;
        }
    return true;
}

bool map_injective(const RingMap& f, const FiniteRingObj& src) {
    // linear, so injective iff the kernel meets the carrier only at zero
    for (const Elem& x : src.carrier()) {
        if (x == src.zero()) continue;
        Elem y = f.apply(x);
        bool zero = true;
        for (const Int& c : y)
            if (c != 0) {
                zero = false;
                break;
            }
        if (zero) return false;
    }
    return true;
}

bool map_surjective(const RingMap& f, const FiniteRingObj& src,
                    const FiniteRingObj& dst) {
    std::set<Elem> images;
    for (const Elem& x : src.carrier()) images.insert(f.apply(x));
    return static_cast<Int>(images.size()) == dst.size();
}

bool map_bijective(const RingMap& f, const FiniteRingObj& src,
                   const FiniteRingObj& dst) {
    if (f.is_identity() && src.mods == dst.mods && src.subset == dst.subset)
        return true;
    if (src.size() != dst.size()) return false;
    return map_injective(f, src);
}

// ---------------------------------------------------------------------------
// tower morphisms
// ---------------------------------------------------------------------------

PipeMorphism0 level_morph0(std::vector<RingMap> comp) {
    PipeMorphism0 m;
    for (std::size_t k = 0; k < comp.size(); ++k) m.dom.push_back(static_cast<int>(k));
    m.comp = std::move(comp);
    return m;
}

PipeMorphism0 identity_morph0(const PipeDiagram& X) {
    std::vector<RingMap> comp;
    for (const FiniteRingObj& A : X.obs) comp.push_back(RingMap::identity(A));
    return level_morph0(std::move(comp));
}

PipeMorphism0 morph0_compose(const PipeMorphism0& g, const PipeMorphism0& f) {
    PipeMorphism0 out;
    for (std::size_t k = 0; k < g.comp.size(); ++k) {
        auto mid = static_cast<std::size_t>(g.dom[k]);
        if (mid >= f.comp.size())
            fail("DepthExceeded", "morphism composition needs a deeper stage");
        out.comp.push_back(g.comp[k].after(f.comp[mid]));
        out.dom.push_back(f.dom[mid]);
    }
    return out;
}

bool morph0_equal(const PipeMorphism0& f, const PipeMorphism0& g,
                  const PipeDiagram& X) {
    std::size_t n = std::min(f.comp.size(), g.comp.size());
    for (std::size_t k = 0; k < n; ++k) {
        if (f.dom[k] == g.dom[k]) {
            if (!f.comp[k].equals(g.comp[k])) return false;
            continue;
        }
        int D = std::max(f.dom[k], g.dom[k]);
        if (D >= static_cast<int>(X.obs.size())) return false;
        RingMap lf = f.comp[k].after(pro_composite(X, D, f.dom[k]));
        RingMap lg = g.comp[k].after(pro_composite(X, D, g.dom[k]));
        if (!lf.equals(lg)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// diagram constructors
// ---------------------------------------------------------------------------

PipeDiagram const_diagram(const FiniteRingObj& A, int stages) {
    if (stages < 1) fail("BadInput", "a tower needs at least one stage");
    PipeDiagram X;
    X.length = 0;
    X.depth_bound = stages;
    for (int k = 0; k < stages; ++k) X.obs.push_back(A);
    for (int k = 0; k + 1 < stages; ++k) X.pro.push_back(RingMap::identity(A));
    return X;
}

PipeDiagram chain_diagram(std::vector<FiniteRingObj> obs, std::vector<RingMap> pro,
                          bool strict) {
    if (obs.empty()) fail("BadInput", "a tower needs at least one stage");
    if (pro.size() + 1 != obs.size())
        fail("BadInput", "a tower of n stages needs n-1 transition maps");
    for (std::size_t k = 0; k < pro.size(); ++k) {
        if (pro[k].cols != obs[k + 1].dim() ||
            static_cast<int>(pro[k].M.size()) != obs[k].dim())
            fail("BadInput", "transition map dimensions do not match the stages");
        if (!map_well_defined(pro[k], obs[k + 1]))
            fail("BadInput", "transition map is not well defined");
        if (strict && !is_ring_map(pro[k], obs[k + 1], obs[k]))
            fail("BadInput", "transition map is not a ring map");
    }
    PipeDiagram X;
    X.length = 0;
    X.depth_bound = static_cast<int>(obs.size());
    X.obs = std::move(obs);
    X.pro = std::move(pro);
    return X;
}

PipeDiagram series_tower(const GaloisRing& R, int stages) {
    FiniteRingObj base = fin_galois(R);
    int bd = base.dim();
    std::vector<FiniteRingObj> obs;
    std::vector<RingMap> pro;
    for (int k = 0; k < stages; ++k) obs.push_back(fin_trunc_poly(base, k + 1));
    for (int k = 0; k + 1 < stages; ++k) {
        RingMap f;
        f.tmods = obs[static_cast<std::size_t>(k)].mods;
        f.cols = obs[static_cast<std::size_t>(k + 1)].dim();
        f.M.assign(static_cast<std::size_t>((k + 1) * bd),
                   std::vector<Int>(static_cast<std::size_t>((k + 2) * bd), 0));
        for (int i = 0; i < (k + 1) * bd; ++i) f.M[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
        pro.push_back(std::move(f));
    }
    return chain_diagram(std::move(obs), std::move(pro));
}

PipeDiagram pro_of_ind(std::vector<PipeDiagram> entries,
                       std::vector<PipeMorphism0> ind_maps, int outer_stages) {
    if (entries.empty()) fail("BadInput", "an ind-system needs at least one entry");
    if (ind_maps.size() + 1 != entries.size())
        fail("BadInput", "an ind-system of n entries needs n-1 maps");
    for (const PipeDiagram& e : entries)
        if (e.length != 0) fail("BadInput", "inner entries must be towers");
    PipeDiagram X;
    X.length = 1;
    X.depth_bound = outer_stages;
    for (int a = 0; a < outer_stages; ++a) {
        X.cols.push_back(entries);
        X.ind.push_back(ind_maps);
    }
    for (int a = 0; a + 1 < outer_stages; ++a) {
        std::vector<PipeMorphism0> row;
        for (const PipeDiagram& e : entries) row.push_back(identity_morph0(e));
        X.outer.push_back(std::move(row));
    }
    return X;
}

namespace {

RingMap product_map(const RingMap& f, const RingMap& g) {
    RingMap h;
    h.tmods = f.tmods;
    h.tmods.insert(h.tmods.end(), g.tmods.begin(), g.tmods.end());
    h.cols = f.cols + g.cols;
    h.M.assign(f.M.size() + g.M.size(),
               std::vector<Int>(static_cast<std::size_t>(h.cols), 0));
    for (std::size_t i = 0; i < f.M.size(); ++i)
        for (std::size_t j = 0; j < static_cast<std::size_t>(f.cols); ++j)
            h.M[i][j] = f.M[i][j];
    for (std::size_t i = 0; i < g.M.size(); ++i)
        for (std::size_t j = 0; j < static_cast<std::size_t>(g.cols); ++j)
            h.M[f.M.size() + i][static_cast<std::size_t>(f.cols) + j] = g.M[i][j];
    return h;
}

PipeMorphism0 product_morph0(const PipeMorphism0& f, const PipeMorphism0& g) {
    if (f.dom != g.dom)
        fail("BadInput", "product of morphisms needs matching germ offsets");
    PipeMorphism0 h;
    h.dom = f.dom;
    for (std::size_t k = 0; k < f.comp.size(); ++k)
        h.comp.push_back(product_map(f.comp[k], g.comp[k]));
    return h;
}

}  // namespace

PipeDiagram product_diagram(const PipeDiagram& X, const PipeDiagram& Y) {
    if (X.length != Y.length)
        fail("BadInput", "product towers must have the same length");
    PipeDiagram P;
    P.length = X.length;
    P.rigid = X.rigid && Y.rigid;
    if (X.length == 0) {
        if (X.obs.size() != Y.obs.size())
            fail("BadInput", "product towers must have the same stage count");
        P.depth_bound = std::min(X.depth_bound, Y.depth_bound);
        for (std::size_t k = 0; k < X.obs.size(); ++k)
            P.obs.push_back(fin_product(X.obs[k], Y.obs[k]));
        for (std::size_t k = 0; k < X.pro.size(); ++k)
            P.pro.push_back(product_map(X.pro[k], Y.pro[k]));
        return P;
    }
    if (X.cols.size() != Y.cols.size())
        fail("BadInput", "product towers must have the same stage count");
    P.depth_bound = std::min(X.depth_bound, Y.depth_bound);
    for (std::size_t a = 0; a < X.cols.size(); ++a) {
        if (X.cols[a].size() != Y.cols[a].size())
            fail("BadInput", "product towers must have the same stage count");
        std::vector<PipeDiagram> row;
        std::vector<PipeMorphism0> irow;
        for (std::size_t b = 0; b < X.cols[a].size(); ++b)
            row.push_back(product_diagram(X.cols[a][b], Y.cols[a][b]));
        for (std::size_t b = 0; b < X.ind[a].size(); ++b)
            irow.push_back(product_morph0(X.ind[a][b], Y.ind[a][b]));
        P.cols.push_back(std::move(row));
        P.ind.push_back(std::move(irow));
    }
    for (std::size_t a = 0; a < X.outer.size(); ++a) {
        std::vector<PipeMorphism0> row;
        for (std::size_t b = 0; b < X.outer[a].size(); ++b)
            row.push_back(product_morph0(X.outer[a][b], Y.outer[a][b]));
        P.outer.push_back(std::move(row));
    }
    return P;
}

namespace {

bool morph0_same(const PipeMorphism0& f, const PipeMorphism0& g) {
    if (f.dom != g.dom || f.comp.size() != g.comp.size()) return false;
    for (std::size_t k = 0; k < f.comp.size(); ++k)
        if (!f.comp[k].equals(g.comp[k])) return false;
    return true;
}

}  // namespace

bool diagram_equal(const PipeDiagram& X, const PipeDiagram& Y) {
    if (X.length != Y.length) return false;
    if (X.length == 0) {
        if (X.obs.size() != Y.obs.size()) return false;
        for (std::size_t k = 0; k < X.obs.size(); ++k)
            if (!X.obs[k].same_as(Y.obs[k])) return false;
        for (std::size_t k = 0; k < X.pro.size(); ++k)
            if (!X.pro[k].equals(Y.pro[k])) return false;
        return true;
    }
    if (X.cols.size() != Y.cols.size() || X.outer.size() != Y.outer.size())
        return false;
    for (std::size_t a = 0; a < X.cols.size(); ++a) {
        if (X.cols[a].size() != Y.cols[a].size() ||
            X.ind[a].size() != Y.ind[a].size())
            return false;
        for (std::size_t b = 0; b < X.cols[a].size(); ++b)
            if (!diagram_equal(X.cols[a][b], Y.cols[a][b])) return false;
        for (std::size_t b = 0; b < X.ind[a].size(); ++b)
            if (!morph0_same(X.ind[a][b], Y.ind[a][b])) return false;
    }
    for (std::size_t a = 0; a < X.outer.size(); ++a) {
        if (X.outer[a].size() != Y.outer[a].size()) return false;
        for (std::size_t b = 0; b < X.outer[a].size(); ++b)
            if (!morph0_same(X.outer[a][b], Y.outer[a][b])) return false;
    }
    return true;
}

namespace {

void validate_morph0(const PipeMorphism0& m, const PipeDiagram& X,
                     const PipeDiagram& Y) {
    if (m.dom.size() != m.comp.size())
        fail("BadInput", "morphism stage lists disagree");
    for (std::size_t k = 0; k < m.comp.size(); ++k) {
        if (k >= Y.obs.size()) break;
        if (m.dom[k] < 0 || m.dom[k] >= static_cast<int>(X.obs.size()))
            fail("BadInput", "morphism germ stage out of range");
        const FiniteRingObj& src = X.obs[static_cast<std::size_t>(m.dom[k])];
        const FiniteRingObj& dst = Y.obs[k];
        if (m.comp[k].cols != src.dim() ||
            static_cast<int>(m.comp[k].M.size()) != dst.dim())
            fail("BadInput", "morphism component dimensions do not match");
        if (!map_well_defined(m.comp[k], src))
            fail("BadInput", "morphism component is not well defined");
    }
}

}  // namespace

void validate_diagram(const PipeDiagram& X) {
    if (X.length == 0) {
        if (X.obs.empty()) fail("BadInput", "a tower needs at least one stage");
        if (X.pro.size() + 1 != X.obs.size())
            fail("BadInput", "a tower of n stages needs n-1 transition maps");
        for (std::size_t k = 0; k < X.pro.size(); ++k)
            if (!map_well_defined(X.pro[k], X.obs[k + 1]))
                fail("BadInput", "transition map is not well defined");
        return;
    }
    if (X.length != 1) fail("BadInput", "only towers of length 0 and 1 exist here");
    if (X.cols.empty()) fail("BadInput", "a tower needs at least one stage");
    std::size_t inner = X.cols.front().size();
    if (X.ind.size() != X.cols.size() || X.outer.size() + 1 != X.cols.size())
        fail("BadInput", "stage and map counts disagree");
    for (std::size_t a = 0; a < X.cols.size(); ++a) {
        if (X.cols[a].size() != inner || X.ind[a].size() + 1 != inner)
            fail("BadInput", "stage and map counts disagree");
        for (const PipeDiagram& c : X.cols[a]) validate_diagram(c);
        for (std::size_t b = 0; b + 1 < inner; ++b)
            validate_morph0(X.ind[a][b], X.cols[a][b], X.cols[a][b + 1]);
    }
    for (std::size_t a = 0; a + 1 < X.cols.size(); ++a) {
        if (X.outer[a].size() != inner)
            fail("BadInput", "stage and map counts disagree");
        for (std::size_t b = 0; b < inner; ++b)
            validate_morph0(X.outer[a][b], X.cols[a + 1][b], X.cols[a][b]);
        for (std::size_t b = 0; b + 1 < inner; ++b) {
            PipeMorphism0 lhs = morph0_compose(X.ind[a][b], X.outer[a][b]);
            PipeMorphism0 rhs = morph0_compose(X.outer[a][b + 1], X.ind[a + 1][b]);
            if (!morph0_equal(lhs, rhs, X.cols[a + 1][b]))
                fail("BadInput", "structure maps do not commute");
        }
    }
}

// ---------------------------------------------------------------------------
// realization
// ---------------------------------------------------------------------------

RingMap pro_composite(const PipeDiagram& X, int from, int to) {
    if (to > from || to < 0 || from >= static_cast<int>(X.obs.size()))
        fail("BadInput", "transition composite out of range");
    RingMap r = RingMap::identity(X.obs[static_cast<std::size_t>(to)]);
    for (int s = to; s < from; ++s) r = r.after(X.pro[static_cast<std::size_t>(s)]);
    return r;
}

namespace {

Realization realize0(const PipeDiagram& X, int depth) {
    if (depth > static_cast<int>(X.obs.size()) || depth > X.depth_bound)
        fail("DepthExceeded", "tower has no stage at this depth");
    Realization r;
    r.obj = X.obs[static_cast<std::size_t>(depth - 1)];
    r.ring_level = true;
    if (depth < static_cast<int>(X.obs.size()) && depth < X.depth_bound)
        r.stabilized = map_bijective(X.pro[static_cast<std::size_t>(depth - 1)],
                                     X.obs[static_cast<std::size_t>(depth)],
                                     X.obs[static_cast<std::size_t>(depth - 1)]);
    return r;
}

}  // namespace

RingMap realize0_map(const PipeMorphism0& m, const PipeDiagram& X, int depth) {
    std::size_t k = static_cast<std::size_t>(depth - 1);
    if (k >= m.comp.size())
        fail("DepthExceeded", "morphism not defined at this depth");
    int d0 = m.dom[k];
    if (d0 > depth - 1)
        fail("DepthExceeded", "morphism germ needs a deeper realization");
    if (d0 == depth - 1) return m.comp[k];
    return m.comp[k].after(pro_composite(X, depth - 1, d0));
}

Realization realize(const PipeDiagram& X, int depth) {
    if (depth < 1) fail("BadInput", "depth must be at least 1");
    validate_diagram(X);
    if (X.length == 0) return realize0(X, depth);
    if (depth > static_cast<int>(X.cols.size()) ||
        static_cast<int>(X.cols.front().size()) < depth || depth > X.depth_bound)
        fail("DepthExceeded", "tower has no stage at this depth");
    std::size_t c = static_cast<std::size_t>(depth - 1);
    Realization r = realize0(X.cols[c][c], depth);
    // ring level: every ind map in the window must be a unital ring map
    for (std::size_t a = 0; a < static_cast<std::size_t>(depth) && r.ring_level; ++a)
        for (std::size_t b = 0; b + 1 < static_cast<std::size_t>(depth) && r.ring_level; ++b) {
            const PipeMorphism0& m = X.ind[a][b];
            for (std::size_t k = 0; k < static_cast<std::size_t>(depth); ++k) {
                if (k >= m.comp.size() || k >= X.cols[a][b + 1].obs.size()) break;
                const FiniteRingObj& src =
                    X.cols[a][b].obs[static_cast<std::size_t>(m.dom[k])];
                const FiniteRingObj& dst = X.cols[a][b + 1].obs[k];
                if (!is_ring_map(m.comp[k], src, dst)) {
                    r.ring_level = false;
                    break;
                }
            }
        }
    // stabilization needs one more stage in each of the three directions
    r.stabilized = false;
    bool probe = static_cast<int>(X.cols.size()) > depth &&
                 static_cast<int>(X.cols.front().size()) > depth &&
                 X.depth_bound > depth;
    if (probe) {
        const PipeDiagram& corner = X.cols[c][c];
        bool ok = realize0(corner, depth).stabilized;
        if (ok) {
            RingMap f = realize0_map(X.ind[c][c], corner, depth);
            ok = map_bijective(f, realize0(corner, depth).obj,
                               realize0(X.cols[c][c + 1], depth).obj);
        }
        if (ok) {
            RingMap f = realize0_map(X.outer[c][c], X.cols[c + 1][c], depth);
            ok = map_bijective(f, realize0(X.cols[c + 1][c], depth).obj,
                               realize0(X.cols[c][c], depth).obj);
        }
        r.stabilized = ok;
    }
    return r;
}

RingMap realize_map(const PipeMorphism& m, const PipeDiagram& X,
                    const PipeDiagram& Y, int depth) {
    if (X.length != 1 || Y.length != 1)
        fail("BadInput", "realized morphisms live between length-1 towers");
    std::size_t c = static_cast<std::size_t>(depth - 1);
    if (c >= m.cols.size() || c >= m.cols[c].size())
        fail("DepthExceeded", "morphism not defined at this depth");
    (void)realize(Y, depth);
    return realize0_map(m.cols[c][c], X.cols[c][c], depth);
}

// ---------------------------------------------------------------------------
// fineness witnesses
// ---------------------------------------------------------------------------

TowerReport check_fine(const PipeDiagram& X, int depth) {
    TowerReport rep;
    if (X.length == 0) {
        rep.detail = "towers of this length are always fine";
        return rep;
    }
    (void)realize(X, depth);
    // the stage-to-colimit maps are germs; window truncation in the source
    // would manufacture spurious kernels, so each composite is tested from
    // the stage its germ is actually defined on
    for (int a = 0; a < depth; ++a) {
        auto au = static_cast<std::size_t>(a);
        for (int b = 0; b < depth; ++b) {
            auto bu = static_cast<std::size_t>(b);
            PipeMorphism0 germ = identity_morph0(X.cols[au][bu]);
            for (int t = b; t < depth - 1; ++t)
                germ = morph0_compose(X.ind[au][static_cast<std::size_t>(t)], germ);
            auto k = static_cast<std::size_t>(depth - 1);
            if (k >= germ.comp.size())
                fail("DepthExceeded", "morphism not defined at this depth");
            auto d0 = static_cast<std::size_t>(germ.dom[k]);
            if (d0 >= X.cols[au][bu].obs.size())
                fail("DepthExceeded", "morphism germ needs a deeper stage");
            if (!map_injective(germ.comp[k], X.cols[au][bu].obs[d0])) {
                rep.pass = false;
                rep.outer = a;
                rep.inner = b;
                std::ostringstream os;
                os << "stage (" << a << "," << b
                   << ") does not embed into its colimit";
                rep.detail = os.str();
                return rep;
            }
        }
    }
    rep.detail = "every stage embeds into its colimit";
    return rep;
}

TowerReport check_cofine(const PipeDiagram& X, int depth) {
    TowerReport rep;
    if (X.length == 0) {
        if (depth > static_cast<int>(X.obs.size()) || depth > X.depth_bound)
            fail("DepthExceeded", "tower has no stage at this depth");
        const FiniteRingObj& top = X.obs[static_cast<std::size_t>(depth - 1)];
        for (int k = 0; k < depth; ++k) {
            RingMap f = pro_composite(X, depth - 1, k);
            if (!map_surjective(f, top, X.obs[static_cast<std::size_t>(k)])) {
                rep.pass = false;
                rep.outer = k;
                std::ostringstream os;
                os << "the limit does not cover stage " << k;
                rep.detail = os.str();
                return rep;
            }
        }
        rep.detail = "the limit covers every stage";
        return rep;
    }
    Realization whole = realize(X, depth);
    for (int a = 0; a < depth; ++a) {
        RingMap f = RingMap::identity(whole.obj);
        for (int t = depth - 2; t >= a; --t) {
            auto tu = static_cast<std::size_t>(t);
            f = realize0_map(X.outer[tu][static_cast<std::size_t>(depth - 1)],
                             X.cols[tu + 1][static_cast<std::size_t>(depth - 1)], depth)
                    .after(f);
        }
        Realization stage =
            realize0(X.cols[static_cast<std::size_t>(a)][static_cast<std::size_t>(depth - 1)], depth);
        if (!map_surjective(f, whole.obj, stage.obj)) {
            rep.pass = false;
            rep.outer = a;
            std::ostringstream os;
            os << "the limit does not cover outer stage " << a;
            rep.detail = os.str();
            return rep;
        }
    }
    rep.detail = "the limit covers every outer stage";
    return rep;
}

// ---------------------------------------------------------------------------
// eventual images
// ---------------------------------------------------------------------------

Cofineify cofineify0(const PipeDiagram& X, int depth) {
    if (X.length != 0)
        fail("BadInput", "eventual images are built from towers of length 0");
    if (depth < 1) fail("BadInput", "depth must be at least 1");
    if (depth > static_cast<int>(X.obs.size()) || depth > X.depth_bound)
        fail("DepthExceeded", "tower has no stage at this depth");
    auto image_from = [&](int from, int to) {
        RingMap f = pro_composite(X, from, to);
        std::set<Elem> im;
        for (const Elem& x : X.obs[static_cast<std::size_t>(from)].carrier())
            im.insert(f.apply(x));
        return im;
    };
    // images are taken from the deepest stage the diagram carries; the flag
    // asks whether dropping that last stage would have changed any of them
    int deepest = static_cast<int>(X.obs.size()) - 1;
    Cofineify out;
    out.evim.length = 0;
    out.evim.depth_bound = depth;
    out.stabilized = deepest >= depth;
    for (int a = 0; a < depth; ++a) {
        std::set<Elem> im = image_from(deepest, a);
        const FiniteRingObj& A = X.obs[static_cast<std::size_t>(a)];
        FiniteRingObj E;
        E.name = "evim " + A.name;
        E.mods = A.mods;
        E.sc = A.sc;
        E.subset.assign(im.begin(), im.end());
        Int full = 1;
        for (const Int& m : E.mods) full *= m;
        if (static_cast<Int>(E.subset.size()) == full) {
            E.subset.clear();
            E.name = A.name;
        }
        if (E.subset.empty() || std::binary_search(E.subset.begin(), E.subset.end(), A.unit))
            E.unit = A.unit;
        out.evim.obs.push_back(std::move(E));
        if (out.stabilized && a <= deepest - 1 && image_from(deepest - 1, a) != im)
            out.stabilized = false;
    }
    for (int a = 0; a + 1 < depth; ++a) {
        RingMap f = X.pro[static_cast<std::size_t>(a)];
        f.tmods = out.evim.obs[static_cast<std::size_t>(a)].mods;
        out.evim.pro.push_back(std::move(f));
    }
    std::vector<RingMap> incl;
    for (int a = 0; a < depth; ++a)
        incl.push_back(RingMap::identity(X.obs[static_cast<std::size_t>(a)]));
    out.to_original = level_morph0(std::move(incl));
    return out;
}

// ---------------------------------------------------------------------------
// level inclusions and the clog fixture
// ---------------------------------------------------------------------------

PipeDiagram include_level(const PipeDiagram& X, int m) {
    if (X.length != 0)
        fail("BadLevel", "level inclusions start from towers of length 0");
    if (m < 0 || m > 1) fail("BadLevel", "inclusion index must be 0 or 1");
    int S = static_cast<int>(X.obs.size());
    PipeDiagram Y;
    Y.length = 1;
    Y.depth_bound = std::min(S, X.depth_bound);
    for (int a = 0; a < S; ++a) {
        std::vector<PipeDiagram> row;
        std::vector<PipeMorphism0> irow;
        if (m == 0) {
            for (int b = 0; b < S; ++b) row.push_back(X);
            for (int b = 0; b + 1 < S; ++b) irow.push_back(identity_morph0(X));
        } else {
            PipeDiagram col = const_diagram(X.obs[static_cast<std::size_t>(a)], S);
            for (int b = 0; b < S; ++b) row.push_back(col);
            for (int b = 0; b + 1 < S; ++b) irow.push_back(identity_morph0(col));
        }
        Y.cols.push_back(std::move(row));
        Y.ind.push_back(std::move(irow));
    }
    for (int a = 0; a + 1 < S; ++a) {
        std::vector<PipeMorphism0> row;
        for (int b = 0; b < S; ++b) {
            if (m == 0) {
                row.push_back(identity_morph0(X));
            } else {
                std::vector<RingMap> comp(static_cast<std::size_t>(S),
                                          X.pro[static_cast<std::size_t>(a)]);
                row.push_back(level_morph0(std::move(comp)));
            }
        }
        Y.outer.push_back(std::move(row));
    }
    return Y;
}

namespace {

Int kernel_size(const RingMap& f, const FiniteRingObj& src) {
    if (src.size() <= kEnumGuard) {
        Int count = 0;
        Elem z(f.tmods.size(), 0);
        for (const Elem& x : src.carrier())
            if (f.apply(x) == z) count += 1;
        return count;
    }
    // coordinate projections drop a block: the kernel is the free tail
    std::vector<bool> hit(static_cast<std::size_t>(f.cols), false);
    for (std::size_t i = 0; i < f.M.size(); ++i)
        for (std::size_t j = 0; j < f.M[i].size(); ++j)
            if (mod_reduce(f.M[i][j], f.tmods[i]) != 0) {
                if (i != j || f.M[i][j] != 1)
                    fail("BadInput", "carrier too large to enumerate");
                hit[j] = true;
            }
    Int count = 1;
    for (std::size_t j = 0; j < hit.size(); ++j)
        if (!hit[j]) count *= src.mods[j];
    return count;
}

}  // namespace

ClogResult clog_example(const GaloisRing& R, int depth) {
    if (depth < 1) fail("BadInput", "depth must be at least 1");
    int W = depth + 1;
    PipeDiagram X = series_tower(R, W);
    ClogResult out;
    out.Q0 = include_level(X, 0);
    out.Q1 = include_level(X, 1);
    for (int a = 0; a < W; ++a) {
        std::vector<PipeMorphism0> row;
        for (int b = 0; b < W; ++b) {
            PipeMorphism0 m;
            for (int k = 0; k < W; ++k) {
                int d0 = std::max(k, a);
                m.dom.push_back(d0);
                m.comp.push_back(pro_composite(X, d0, a));
            }
            row.push_back(std::move(m));
        }
        out.quot.cols.push_back(std::move(row));
    }
    RingMap f = realize_map(out.quot, out.Q0, out.Q1, depth);
    out.realized_bijective = map_bijective(f, realize(out.Q0, depth).obj,
                                           realize(out.Q1, depth).obj);
    const FiniteRingObj& top = X.obs[static_cast<std::size_t>(W - 1)];
    for (int n = 1; n <= depth; ++n)
        out.kernel_sizes.push_back(kernel_size(pro_composite(X, W - 1, n - 1), top));
    return out;
}

// ---------------------------------------------------------------------------
// rigid quotients
// ---------------------------------------------------------------------------

RigidPresentation rigid_quotient(const RigidPresentation& S,
                                 const std::vector<std::vector<Elem>>& gen_images) {
    if (!S.diag.rigid)
        fail("NotRigid", "quotients need a rigid presentation");
    if (S.diag.length != 0)
        fail("BadInput", "rigid quotients are built from towers of length 0");
    std::size_t stages = S.diag.obs.size();
    for (const auto& g : gen_images)
        if (g.size() != stages)
            fail("BadInput", "each generator needs an image at every stage");
    RigidPresentation out;
    out.base = S.base;
    out.diag.length = 0;
    out.diag.rigid = true;
    out.diag.depth_bound = S.diag.depth_bound;
    for (std::size_t k = 0; k < stages; ++k) {
        std::vector<Elem> gens;
        for (const auto& g : gen_images) gens.push_back(g[k]);
        out.diag.obs.push_back(fin_ideal_span(S.diag.obs[k], gens));
    }
    for (std::size_t k = 0; k + 1 < stages; ++k) {
        RingMap f = S.diag.pro[k];
        for (const Elem& x : out.diag.obs[k + 1].carrier())
            if (!out.diag.obs[k].contains(f.apply(x)))
                fail("BadInput", "transition map does not preserve the ideal span");
        out.diag.pro.push_back(std::move(f));
    }
    return out;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

namespace {

long to_l(const Int& v) { return v.convert_to<long>(); }

Json ring_to_j(const FiniteRingObj& A) {
    Json j;
    j["name"] = A.name;
    j["mods"] = Json::array();
    for (const Int& m : A.mods) j["mods"].push_back(to_l(m));
    j["sc"] = Json::array();
    for (const auto& [key, terms] : A.sc) {
        Json t = Json::array();
        for (const auto& [k, c] : terms) t.push_back({k, to_l(c)});
        j["sc"].push_back({key.first, key.second, t});
    }
    j["unit"] = Json::array();
    for (const Int& c : A.unit) j["unit"].push_back(to_l(c));
    if (!A.subset.empty()) {
        j["subset"] = Json::array();
        for (const Elem& e : A.subset) {
            Json je = Json::array();
            for (const Int& c : e) je.push_back(to_l(c));
            j["subset"].push_back(je);
        }
    }
    return j;
}

FiniteRingObj ring_from_j(const Json& j) {
    if (!j.is_object() || !j.contains("mods") || !j.contains("sc") ||
        !j.contains("unit"))
        fail("UnknownFormat", "ring object needs mods, sc, unit");
    FiniteRingObj A;
    A.name = j.value("name", std::string("ring"));
    for (const Json& m : j.at("mods")) A.mods.push_back(Int(m.get<long>()));
    for (const Json& e : j.at("sc")) {
        if (!e.is_array() || e.size() != 3)
            fail("UnknownFormat", "structure constant entries are triples");
        std::vector<std::pair<int, Int>> terms;
        for (const Json& t : e[2])
            terms.emplace_back(t[0].get<int>(), Int(t[1].get<long>()));
        A.sc.push_back({{e[0].get<int>(), e[1].get<int>()}, std::move(terms)});
    }
    for (const Json& c : j.at("unit")) A.unit.push_back(Int(c.get<long>()));
    if (j.contains("subset"))
        for (const Json& e : j.at("subset")) {
            Elem el;
            for (const Json& c : e) el.push_back(Int(c.get<long>()));
            A.subset.push_back(std::move(el));
        }
    A.sc = normalize_sc(std::move(A.sc), A.mods);
    std::sort(A.subset.begin(), A.subset.end());
    return A;
}

Json map_to_j(const RingMap& f) {
    Json j;
    j["rows"] = static_cast<int>(f.M.size());
    j["cols"] = f.cols;
    j["mods"] = Json::array();
    for (const Int& m : f.tmods) j["mods"].push_back(to_l(m));
    j["M"] = Json::array();
    for (const auto& row : f.M) {
        Json r = Json::array();
        for (const Int& v : row) r.push_back(to_l(v));
        j["M"].push_back(r);
    }
    return j;
}

RingMap map_from_j(const Json& j) {
    if (!j.is_object() || !j.contains("cols") || !j.contains("mods") ||
        !j.contains("M"))
        fail("UnknownFormat", "map needs cols, mods, M");
    RingMap f;
    f.cols = j.at("cols").get<int>();
    for (const Json& m : j.at("mods")) f.tmods.push_back(Int(m.get<long>()));
    for (const Json& row : j.at("M")) {
        std::vector<Int> r;
        for (const Json& v : row) r.push_back(Int(v.get<long>()));
        if (static_cast<int>(r.size()) != f.cols)
            fail("UnknownFormat", "matrix row width disagrees with cols");
        f.M.push_back(std::move(r));
    }
    if (f.M.size() != f.tmods.size())
        fail("UnknownFormat", "matrix height disagrees with mods");
    if (j.contains("rows") && j.at("rows").get<int>() != static_cast<int>(f.M.size()))
        fail("UnknownFormat", "matrix height disagrees with rows");
    return f;
}

Json morph_to_j(const PipeMorphism0& m) {
    Json j;
    j["dom"] = m.dom;
    j["comp"] = Json::array();
    for (const RingMap& f : m.comp) j["comp"].push_back(map_to_j(f));
    return j;
}

PipeMorphism0 morph_from_j(const Json& j) {
    if (!j.is_object() || !j.contains("dom") || !j.contains("comp"))
        fail("UnknownFormat", "morphism needs dom, comp");
    PipeMorphism0 m;
    for (const Json& d : j.at("dom")) m.dom.push_back(d.get<int>());
    for (const Json& f : j.at("comp")) m.comp.push_back(map_from_j(f));
    if (m.dom.size() != m.comp.size())
        fail("UnknownFormat", "morphism stage lists disagree");
    return m;
}

struct RingTable {
    std::vector<Json> rows;
    std::map<std::string, int> index;
    int put(const FiniteRingObj& A) {
        Json j = ring_to_j(A);
        std::string key = j.dump();
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(rows.size());
        rows.push_back(std::move(j));
        index.emplace(std::move(key), id);
        return id;
    }
};

Json node0_to_j(const PipeDiagram& X, RingTable& table) {
    Json j;
    j["axis"] = "pro";
    j["stages"] = Json::array();
    for (const FiniteRingObj& A : X.obs) j["stages"].push_back(table.put(A));
    j["maps"] = Json::array();
    for (const RingMap& f : X.pro) j["maps"].push_back(map_to_j(f));
    return j;
}

PipeDiagram node0_from_j(const Json& j, const std::vector<FiniteRingObj>& rings) {
    PipeDiagram X;
    X.length = 0;
    if (!j.contains("stages") || !j.contains("maps"))
        fail("UnknownFormat", "tower node needs stages and maps");
    for (const Json& s : j.at("stages")) {
        int id = s.get<int>();
        if (id < 0 || id >= static_cast<int>(rings.size()))
            fail("UnknownFormat", "ring reference out of range");
        X.obs.push_back(rings[static_cast<std::size_t>(id)]);
    }
    for (const Json& f : j.at("maps")) X.pro.push_back(map_from_j(f));
    X.depth_bound = static_cast<int>(X.obs.size());
    return X;
}

}  // namespace

Json diagram_to_json(const PipeDiagram& X) {
    RingTable table;
    Json root;
    if (X.length == 0) {
        root = node0_to_j(X, table);
    } else {
        root["axis"] = "pro";
        root["stages"] = Json::array();
        for (std::size_t a = 0; a < X.cols.size(); ++a) {
            Json col;
            col["axis"] = "ind";
            col["stages"] = Json::array();
            for (const PipeDiagram& e : X.cols[a])
                col["stages"].push_back(node0_to_j(e, table));
            col["maps"] = Json::array();
            for (const PipeMorphism0& m : X.ind[a])
                col["maps"].push_back(morph_to_j(m));
            root["stages"].push_back(std::move(col));
        }
        root["maps"] = Json::array();
        for (const auto& row : X.outer) {
            Json r = Json::array();
            for (const PipeMorphism0& m : row) r.push_back(morph_to_j(m));
            root["maps"].push_back(std::move(r));
        }
    }
    Json out;
    out["rings"] = table.rows;
    out["length"] = X.length;
    out["rigid"] = X.rigid;
    out["depth_bound"] = X.depth_bound;
    out["root"] = std::move(root);
    return out;
}

PipeDiagram diagram_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("rings") || !j.contains("root") ||
        !j.contains("length"))
        fail("UnknownFormat", "tower document needs rings, length, root");
    std::vector<FiniteRingObj> rings;
    for (const Json& r : j.at("rings")) rings.push_back(ring_from_j(r));
    int length = j.at("length").get<int>();
    const Json& root = j.at("root");
    PipeDiagram X;
    if (length == 0) {
        X = node0_from_j(root, rings);
    } else if (length == 1) {
        X.length = 1;
        if (!root.contains("stages") || !root.contains("maps"))
            fail("UnknownFormat", "tower node needs stages and maps");
        for (const Json& col : root.at("stages")) {
            if (!col.is_object() || col.value("axis", "") != "ind")
                fail("UnknownFormat", "outer stages must be ind nodes");
            std::vector<PipeDiagram> row;
            std::vector<PipeMorphism0> irow;
            for (const Json& e : col.at("stages"))
                row.push_back(node0_from_j(e, rings));
            for (const Json& m : col.at("maps")) irow.push_back(morph_from_j(m));
            X.cols.push_back(std::move(row));
            X.ind.push_back(std::move(irow));
        }
        for (const Json& r : root.at("maps")) {
            std::vector<PipeMorphism0> row;
            for (const Json& m : r) row.push_back(morph_from_j(m));
            X.outer.push_back(std::move(row));
        }
    } else {
        fail("UnknownFormat", "only towers of length 0 and 1 exist here");
    }
    X.rigid = j.value("rigid", false);
    X.depth_bound = j.value("depth_bound",
                            X.length == 0 ? static_cast<int>(X.obs.size())
                                          : static_cast<int>(X.cols.size()));
    validate_diagram(X);
    return X;
}

}  // namespace lt
