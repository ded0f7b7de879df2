#include "stagedlt/series.hpp"

#include <sstream>

namespace lt {

namespace {

// coefficient rendering shared by both printers: pure numerals attach to the
// monomial directly ("2x"), anything else is parenthesized ("(u1)x^2")
std::string coeff_prefix(const StagedElement& c) {
    std::string cs = c.str();
    if (cs == "1") return "";
    bool numeral = !cs.empty();
    for (char ch : cs)
        if (!std::isdigit(static_cast<unsigned char>(ch))) numeral = false;
    return numeral ? cs : "(" + cs + ")";
}

std::string power_str(const char* var, int e) {
    if (e == 0) return "";
    std::string s = var;
    if (e > 1) s += "^" + std::to_string(e);
    return s;
}

} // namespace

TruncSeries1::TruncSeries1(const StagedRing& R, int stage)
    : ring_(R), stage_(stage),
      c_(static_cast<std::size_t>(R.spec().prof.Nx), R.zero(stage)) {
    if (stage < 0 || stage > R.stages())
        fail("BadInput", "series stage out of range");
}

TruncSeries1 TruncSeries1::identity(const StagedRing& R, int stage) {
    TruncSeries1 f(R, stage);
    if (f.xcap() < 2)
        fail("BadInput", "window too small to hold x itself");
    f.set_coeff(1, R.one(stage));
    return f;
}

const StagedElement& TruncSeries1::coeff(int j) const {
    if (j < 0 || j >= xcap())
        fail("BadInput", "series degree out of the window");
    return c_[static_cast<std::size_t>(j)];
}

void TruncSeries1::set_coeff(int j, const StagedElement& v) {
    if (j < 0 || j >= xcap())
        fail("BadInput", "series degree out of the window");
    if (!(v.ring() == ring_.spec()))
        fail("MixedRings", "coefficient from a different staged ring");
    if (v.stage() > stage_)
        fail("BadInput", "coefficient stage above the series stage");
    c_[static_cast<std::size_t>(j)] = v.promote(stage_);
}

bool TruncSeries1::is_zero() const {
    for (const auto& v : c_)
        if (!v.is_zero()) return false;
    return true;
}

void TruncSeries1::check_same_(const TruncSeries1& o) const {
    if (!(ring_.spec() == o.ring_.spec()))
        fail("MixedRings", "series over different staged rings");
}

TruncSeries1 TruncSeries1::operator+(const TruncSeries1& o) const {
    check_same_(o);
    TruncSeries1 r(ring_, std::max(stage_, o.stage_));
    for (int j = 0; j < xcap(); ++j)
        r.set_coeff(j, (c_[j] + o.c_[j]).promote(r.stage_));
    return r;
}

TruncSeries1 TruncSeries1::operator-() const {
    TruncSeries1 r(ring_, stage_);
    for (int j = 0; j < xcap(); ++j) r.set_coeff(j, -c_[j]);
    return r;
}

TruncSeries1 TruncSeries1::operator-(const TruncSeries1& o) const {
    return *this + (-o);
}

TruncSeries1 TruncSeries1::operator*(const TruncSeries1& o) const {
    check_same_(o);
    TruncSeries1 r(ring_, std::max(stage_, o.stage_));
    for (int i = 0; i < xcap(); ++i) {
        if (c_[i].is_zero()) continue;
        for (int j = 0; i + j < xcap(); ++j) {
            if (o.c_[j].is_zero()) continue;
            r.set_coeff(i + j, (r.c_[i + j] + c_[i] * o.c_[j]).promote(r.stage_));
        }
    }
    return r;
}

TruncSeries1 TruncSeries1::scale(const StagedElement& c) const {
    TruncSeries1 r(ring_, std::max(stage_, c.stage()));
    if (c.is_zero()) return r;
    for (int j = 0; j < xcap(); ++j)
        if (!c_[j].is_zero()) r.set_coeff(j, (c_[j] * c).promote(r.stage_));
    return r;
}

TruncSeries1 TruncSeries1::pow(int k) const {
    if (k < 0)
        fail("BadInput", "series powers are nonnegative");
    TruncSeries1 r(ring_, stage_);
    r.set_coeff(0, ring_.one(stage_));
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
}

TruncSeries1 TruncSeries1::at_stage(int s) const {
    TruncSeries1 r(ring_, s);
    for (int j = 0; j < xcap(); ++j) r.set_coeff(j, c_[j].promote(s));
    return r;
}

bool TruncSeries1::operator==(const TruncSeries1& o) const {
    check_same_(o);
    for (int j = 0; j < xcap(); ++j)
        if (c_[j] != o.c_[j]) return false;
    return true;
}

std::string TruncSeries1::str() const {
    std::ostringstream os;
    bool first = true;
    for (int j = 0; j < xcap(); ++j) {
        if (c_[j].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        if (j == 0) {
            std::string cs = c_[j].str();
            os << (cs.find(' ') != std::string::npos ? "(" + cs + ")" : cs);
        } else {
            os << coeff_prefix(c_[j]) << power_str("x", j);
        }
    }
    return first ? "0" : os.str();
}

TruncSeries2::TruncSeries2(const StagedRing& R, int stage)
    : ring_(R), stage_(stage), nx_(R.spec().prof.Nx),
      c_(static_cast<std::size_t>(nx_ * nx_), R.zero(stage)) {
    if (stage < 0 || stage > R.stages())
        fail("BadInput", "series stage out of range");
}

const StagedElement& TruncSeries2::coeff(int i, int j) const {
    if (i < 0 || j < 0 || i + j >= nx_)
        fail("BadInput", "series degree out of the window");
    return c_[static_cast<std::size_t>(idx_(i, j))];
}

void TruncSeries2::set_coeff(int i, int j, const StagedElement& v) {
    if (i < 0 || j < 0 || i + j >= nx_)
        fail("BadInput", "series degree out of the window");
    if (!(v.ring() == ring_.spec()))
        fail("MixedRings", "coefficient from a different staged ring");
    if (v.stage() > stage_)
        fail("BadInput", "coefficient stage above the series stage");
    c_[static_cast<std::size_t>(idx_(i, j))] = v.promote(stage_);
}

bool TruncSeries2::is_zero() const {
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; i + j < nx_; ++j)
            if (!coeff(i, j).is_zero()) return false;
    return true;
}

void TruncSeries2::check_same_(const TruncSeries2& o) const {
    if (!(ring_.spec() == o.ring_.spec()))
        fail("MixedRings", "series over different staged rings");
}

TruncSeries2 TruncSeries2::operator+(const TruncSeries2& o) const {
    check_same_(o);
    TruncSeries2 r(ring_, std::max(stage_, o.stage_));
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; i + j < nx_; ++j)
            r.set_coeff(i, j, (coeff(i, j) + o.coeff(i, j)).promote(r.stage_));
    return r;
}

TruncSeries2 TruncSeries2::operator-(const TruncSeries2& o) const {
    check_same_(o);
    TruncSeries2 r(ring_, std::max(stage_, o.stage_));
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; i + j < nx_; ++j)
            r.set_coeff(i, j, (coeff(i, j) - o.coeff(i, j)).promote(r.stage_));
    return r;
}

TruncSeries2 TruncSeries2::operator*(const TruncSeries2& o) const {
    check_same_(o);
    TruncSeries2 r(ring_, std::max(stage_, o.stage_));
    for (int i1 = 0; i1 < nx_; ++i1) {
        for (int j1 = 0; i1 + j1 < nx_; ++j1) {
            const StagedElement& a = coeff(i1, j1);
            if (a.is_zero()) continue;
            for (int i2 = 0; i1 + j1 + i2 < nx_; ++i2) {
                for (int j2 = 0; i1 + j1 + i2 + j2 < nx_; ++j2) {
                    const StagedElement& b = o.coeff(i2, j2);
                    if (b.is_zero()) continue;
                    int i = i1 + i2, j = j1 + j2;
                    r.set_coeff(i, j, (r.coeff(i, j) + a * b).promote(r.stage_));
                }
            }
        }
    }
    return r;
}

TruncSeries2 TruncSeries2::scale(const StagedElement& c) const {
    TruncSeries2 r(ring_, std::max(stage_, c.stage()));
    if (c.is_zero()) return r;
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; i + j < nx_; ++j)
            if (!coeff(i, j).is_zero())
                r.set_coeff(i, j, (coeff(i, j) * c).promote(r.stage_));
    return r;
}

TruncSeries2 TruncSeries2::at_stage(int s) const {
    TruncSeries2 r(ring_, s);
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; i + j < nx_; ++j)
            r.set_coeff(i, j, coeff(i, j).promote(s));
    return r;
}

bool TruncSeries2::operator==(const TruncSeries2& o) const {
    check_same_(o);
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; i + j < nx_; ++j)
            if (coeff(i, j) != o.coeff(i, j)) return false;
    return true;
}

std::string TruncSeries2::str() const {
    std::ostringstream os;
    bool first = true;
    for (int d = 0; d < nx_; ++d) {
        for (int i = d; i >= 0; --i) {   // x-major within a grade
            int j = d - i;
            if (coeff(i, j).is_zero()) continue;
            if (!first) os << " + ";
            first = false;
            if (d == 0) {
                std::string cs = coeff(i, j).str();
                os << (cs.find(' ') != std::string::npos ? "(" + cs + ")" : cs);
            } else {
                os << coeff_prefix(coeff(i, j)) << power_str("x", i) << power_str("y", j);
            }
        }
    }
    return first ? "0" : os.str();
}

TruncSeries1 compose(const TruncSeries1& f, const TruncSeries1& g) {
    if (!(f.ring().spec() == g.ring().spec()))
        fail("MixedRings", "series over different staged rings");
    if (!g.substitutable())
        fail("BadInput", "substituted series must have zero constant term");
    int nx = f.xcap();
    TruncSeries1 r(f.ring(), std::max(f.stage(), g.stage()));
    r.set_coeff(0, f.coeff(0).promote(r.stage()));
    TruncSeries1 gp = g;   // g^j
    for (int j = 1; j < nx; ++j) {
        if (j > 1) gp = gp * g;
        if (f.coeff(j).is_zero()) continue;
        r = r + gp.scale(f.coeff(j));
    }
    return r;
}

TruncSeries1 comp_inverse(const TruncSeries1& f) {
    if (!f.substitutable())
        fail("BadInput", "compositional inverse needs zero constant term");
    const StagedRing& R = f.ring();
    int nx = f.xcap();
    StagedElement b1inv = f.coeff(1).try_invert();
    TruncSeries1 g(R, std::max(f.stage(), b1inv.stage()));
    g.set_coeff(1, b1inv.promote(g.stage()));
    for (int n = 2; n < nx; ++n) {
        // with g correct below degree n, f(g) = x + c x^n + ...; the new
        // coefficient enters through b_1 g_n only
        StagedElement c = compose(f, g).coeff(n);
        g.set_coeff(n, (-(b1inv * c)).promote(g.stage()));
    }
    return g;
}

TruncSeries1 eval2(const TruncSeries2& F, const TruncSeries1& s, const TruncSeries1& t) {
    if (!(F.ring().spec() == s.ring().spec()) || !(F.ring().spec() == t.ring().spec()))
        fail("MixedRings", "series over different staged rings");
    if (!s.substitutable() || !t.substitutable())
        fail("BadInput", "substituted series must have zero constant term");
    int nx = F.xcap();
    int stage = std::max(F.stage(), std::max(s.stage(), t.stage()));
    // powers of s, on demand
    std::vector<TruncSeries1> sp;
    sp.push_back(TruncSeries1(F.ring(), stage));
    sp[0].set_coeff(0, F.ring().one(stage));
    TruncSeries1 r(F.ring(), stage);
    TruncSeries1 tp = t;   // t^j
    for (int j = 0; j < nx; ++j) {
        if (j == 1) tp = t;
        if (j > 1) tp = tp * t;
        // row sum Sigma_i F_{ij} s^i, then one multiplication by t^j
        TruncSeries1 row(F.ring(), stage);
        bool any = false;
        for (int i = 0; i + j < nx; ++i) {
            if (F.coeff(i, j).is_zero()) continue;
            while (static_cast<int>(sp.size()) <= i) sp.push_back(sp.back() * s);
            row = row + sp[i].scale(F.coeff(i, j));
            any = true;
        }
        if (!any) continue;
        r = r + (j == 0 ? row : row * tp);
    }
    return r;
}

TruncSeries2 eval2_sep(const TruncSeries2& F, const TruncSeries1& sx, const TruncSeries1& sy) {
    if (!(F.ring().spec() == sx.ring().spec()) || !(F.ring().spec() == sy.ring().spec()))
        fail("MixedRings", "series over different staged rings");
    if (!sx.substitutable() || !sy.substitutable())
        fail("BadInput", "substituted series must have zero constant term");
    int nx = F.xcap();
    int stage = std::max(F.stage(), std::max(sx.stage(), sy.stage()));
    std::vector<TruncSeries1> xp;
    xp.push_back(TruncSeries1(F.ring(), stage));
    xp[0].set_coeff(0, F.ring().one(stage));
    TruncSeries2 r(F.ring(), stage);
    TruncSeries1 yp = sy;   // sy^j
    for (int j = 0; j < nx; ++j) {
        if (j == 1) yp = sy;
        if (j > 1) yp = yp * sy;
        TruncSeries1 row(F.ring(), stage);
        bool any = false;
        for (int i = 0; i + j < nx; ++i) {
            if (F.coeff(i, j).is_zero()) continue;
            while (static_cast<int>(xp.size()) <= i) xp.push_back(xp.back() * sx);
            row = row + xp[i].scale(F.coeff(i, j));
            any = true;
        }
        if (!any) continue;
        for (int a = 0; a < nx; ++a) {
            if (row.coeff(a).is_zero()) continue;
            for (int b = 0; a + b < nx; ++b) {
                if (j == 0) {
                    if (b == 0)
                        r.set_coeff(a, 0, (r.coeff(a, 0) + row.coeff(a)).promote(stage));
                } else if (!yp.coeff(b).is_zero()) {
                    r.set_coeff(a, b,
                                (r.coeff(a, b) + row.coeff(a) * yp.coeff(b)).promote(stage));
                }
            }
        }
    }
    return r;
}

TruncSeries2 compose12(const TruncSeries1& f, const TruncSeries2& G) {
    if (!(f.ring().spec() == G.ring().spec()))
        fail("MixedRings", "series over different staged rings");
    if (!G.coeff(0, 0).is_zero())
        fail("BadInput", "substituted series must have zero constant term");
    int nx = f.xcap();
    int stage = std::max(f.stage(), G.stage());
    TruncSeries2 r(f.ring(), stage);
    if (!f.coeff(0).is_zero())
        r.set_coeff(0, 0, f.coeff(0).promote(stage));
    TruncSeries2 gp = G;   // G^k
    for (int k = 1; k < nx; ++k) {
        if (k > 1) gp = gp * G;
        if (f.coeff(k).is_zero()) continue;
        r = r + gp.scale(f.coeff(k));
    }
    return r;
}

} // namespace lt
