#include "stagedlt/galois.hpp"

#include <algorithm>
#include <sstream>

namespace lt {
namespace {

bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

Int pow_int(std::int64_t p, int a) {
    Int r = 1;
    for (int i = 0; i < a; ++i) r *= p;
    return r;
}

// --- F_p[t] helpers for the default-polynomial search and mod-p inversion ---

using FpPoly = std::vector<std::int64_t>;   // little-endian, trimmed

void fp_trim(FpPoly& x) {
    while (!x.empty() && x.back() == 0) x.pop_back();
}

FpPoly fp_mod(FpPoly x, const FpPoly& m, std::int64_t p) {
    fp_trim(x);
    while (x.size() >= m.size() && !x.empty()) {
        // m is monic up to a unit: scale by lead(x) * lead(m)^-1
        std::int64_t lead_m = m.back();
        std::int64_t inv_lm = 1;
        for (std::int64_t i = 1; i < p; ++i)
            if (lead_m * i % p == 1) { inv_lm = i; break; }
        std::int64_t q = x.back() * inv_lm % p;
        std::size_t shift = x.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i) {
            x[shift + i] = ((x[shift + i] - q * m[i]) % p + p) % p;
        }
        fp_trim(x);
    }
    return x;
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, std::int64_t p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    fp_trim(r);
    return r;
}

FpPoly fp_sub(FpPoly a, const FpPoly& b, std::int64_t p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i)
        a[i] = ((a[i] - b[i]) % p + p) % p;
    fp_trim(a);
    return a;
}

// Divisibility trial against every monic divisor of degree <= deg(f)/2.
// Fine at n <= 8 with small p.
bool fp_irreducible(const FpPoly& f, std::int64_t p) {
    int n = static_cast<int>(f.size()) - 1;
    if (n < 1) return false;
    for (int d = 1; 2 * d <= n; ++d) {
        // enumerate monic degree-d candidates by counting in base p
        std::vector<std::int64_t> c(d, 0);
        while (true) {
            FpPoly g(c.begin(), c.end());
            g.push_back(1);
            if (fp_mod(f, g, p).empty()) return false;
            int i = 0;
            for (; i < d; ++i) {
                if (++c[i] < p) break;
                c[i] = 0;
            }
            if (i == d) break;
        }
    }
    return true;
}

// Extended Euclid in F_p[t]: returns s with s*x == 1 mod (m), gcd(x,m)=1 assumed.
FpPoly fp_inverse_mod(const FpPoly& x, const FpPoly& m, std::int64_t p) {
    FpPoly r0 = m, r1 = fp_mod(x, m, p);
    FpPoly s0 = {}, s1 = {1};
    while (!r1.empty()) {
        // divide r0 by r1
        FpPoly q;
        FpPoly rem = r0;
        fp_trim(rem);
        if (rem.size() >= r1.size()) {
            q.assign(rem.size() - r1.size() + 1, 0);
            std::int64_t inv_lead = 1;
            for (std::int64_t i = 1; i < p; ++i)
                if (r1.back() * i % p == 1) { inv_lead = i; break; }
            while (rem.size() >= r1.size() && !rem.empty()) {
                std::int64_t qc = rem.back() * inv_lead % p;
                std::size_t shift = rem.size() - r1.size();
                q[shift] = qc;
                for (std::size_t i = 0; i < r1.size(); ++i)
                    rem[shift + i] = ((rem[shift + i] - qc * r1[i]) % p + p) % p;
                fp_trim(rem);
            }
        } else {
            rem = r0;
        }
        FpPoly s2 = fp_sub(s0, fp_mul(q, s1, p), p);
        r0 = r1; r1 = rem;
        s0 = s1; s1 = s2;
    }
    // s0*x = r0 mod m with r0 a nonzero constant; scale so the product is 1
    std::int64_t c = r0.empty() ? 1 : r0[0] % p;
    std::int64_t cinv = 1;
    for (std::int64_t i = 1; i < p; ++i)
        if (c * i % p == 1) { cinv = i; break; }
    for (auto& v : s0) v = v * cinv % p;
    return fp_mod(s0, m, p);
}

std::vector<Int> default_poly(std::int64_t p, int n) {
    // lex-least tuple (c0,...,c_{n-1}) with t^n + sum c_i t^i irreducible mod p
    std::vector<std::int64_t> c(n, 0);
    // iterate with c0 most significant so the tuple order is lexicographic
    while (true) {
        FpPoly f(c.begin(), c.end());
        f.push_back(1);
        if (fp_irreducible(f, p)) {
            std::vector<Int> out(n + 1);
            for (int i = 0; i < n; ++i) out[i] = c[i];
            out[n] = 1;
            return out;
        }
        int i = n - 1;
        for (; i >= 0; --i) {
            if (++c[i] < p) break;
            c[i] = 0;
        }
        if (i < 0) break;
    }
    fail("BadInput", "no irreducible polynomial found (impossible for prime p)");
}

} // namespace

std::string GaloisRingSpec::describe() const {
    std::ostringstream os;
    os << "GR(" << p << "," << a << "," << n << "; f=";
    bool first = true;
    for (int i = n; i >= 0; --i) {
        if (f[i] == 0) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0 || f[i] != 1) os << f[i];
        if (i >= 1) os << "t";
        if (i >= 2) os << "^" << i;
    }
    os << ")";
    return os.str();
}

GaloisRing::GaloisRing(std::int64_t p, int a, int n)
    : GaloisRing(p, a, n, default_poly(p, n)) {}

GaloisRing::GaloisRing(std::int64_t p, int a, int n, std::vector<Int> f) {
    if (!is_prime(p)) fail("BadInput", "p must be prime");
    if (a < 1) fail("BadInput", "precision a must be >= 1");
    if (n < 1 || n > 8) fail("BadInput", "residue degree n must be in [1,8]");
    if (static_cast<int>(f.size()) != n + 1 || f[n] != 1)
        fail("BadInput", "f must be monic of degree n");
    auto s = std::make_shared<GaloisRingSpec>();
    s->p = p;
    s->a = a;
    s->n = n;
    s->pa = pow_int(p, a);
    for (auto& c : f) {
        c %= s->pa;
        if (c < 0) c += s->pa;
    }
    f[n] = 1;
    FpPoly fbar(n + 1);
    for (int i = 0; i <= n; ++i) fbar[i] = static_cast<std::int64_t>(f[i] % p);
    if (!fp_irreducible(fbar, p)) fail("BadInput", "f is reducible mod p");
    s->f = std::move(f);
    s_ = std::move(s);
}

GrElement GaloisRing::zero() const {
    return GrElement(s_, std::vector<Int>(s_->n, 0));
}

GrElement GaloisRing::one() const {
    std::vector<Int> c(s_->n, 0);
    c[0] = 1;
    return GrElement(s_, std::move(c));
}

GrElement GaloisRing::from_int(const Int& k) const {
    std::vector<Int> c(s_->n, 0);
    c[0] = k;
    return GrElement(s_, std::move(c));
}

GrElement GaloisRing::make(std::vector<Int> coords) const {
    if (static_cast<int>(coords.size()) != s_->n)
        fail("BadInput", "coordinate list must have length n");
    return GrElement(s_, std::move(coords));
}

GrElement::GrElement(std::shared_ptr<const GaloisRingSpec> s, std::vector<Int> c)
    : s_(std::move(s)), c_(std::move(c)) {
    reduce_();
}

void GrElement::reduce_() {
    for (auto& x : c_) {
        x %= s_->pa;
        if (x < 0) x += s_->pa;
    }
}

void GrElement::check_same_(const GrElement& o) const {
    if (!s_ || !o.s_ || !(*s_ == *o.s_))
        fail("MixedRings", "operands live in different coefficient rings");
}

bool GrElement::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

int GrElement::val() const {
    int v = s_->a;
    for (const auto& x : c_) {
        if (x == 0) continue;
        int w = 0;
        Int y = x;
        while (y % s_->p == 0) { y /= s_->p; ++w; }
        v = std::min(v, w);
        if (v == 0) break;
    }
    return v;
}

GrElement GrElement::operator+(const GrElement& o) const {
    check_same_(o);
    std::vector<Int> c(c_);
    for (int i = 0; i < s_->n; ++i) c[i] += o.c_[i];
    return GrElement(s_, std::move(c));
}

GrElement GrElement::operator-(const GrElement& o) const {
    check_same_(o);
    std::vector<Int> c(c_);
    for (int i = 0; i < s_->n; ++i) c[i] -= o.c_[i];
    return GrElement(s_, std::move(c));
}

GrElement GrElement::operator-() const {
    std::vector<Int> c(c_);
    for (auto& x : c) x = -x;
    return GrElement(s_, std::move(c));
}

GrElement GrElement::operator*(const GrElement& o) const {
    check_same_(o);
    int n = s_->n;
    std::vector<Int> t(2 * n - 1, 0);
    for (int i = 0; i < n; ++i) {
        if (c_[i] == 0) continue;
        for (int j = 0; j < n; ++j)
            t[i + j] += c_[i] * o.c_[j];
    }
    // reduce by monic f: t^n == -(f[0] + f[1] t + ... + f[n-1] t^{n-1})
    for (int k = 2 * n - 2; k >= n; --k) {
        if (t[k] == 0) continue;
        Int lead = t[k];
        t[k] = 0;
        for (int i = 0; i < n; ++i)
            t[k - n + i] -= lead * s_->f[i];
    }
    t.resize(n);
    return GrElement(s_, std::move(t));
}

GrElement GrElement::pow(std::uint64_t k) const {
    std::vector<Int> oc(s_->n, 0);
    oc[0] = 1;
    GrElement r(s_, std::move(oc));
    GrElement b = *this;
    while (k) {
        if (k & 1) r = r * b;
        b = b * b;
        k >>= 1;
    }
    return r;
}

bool GrElement::operator==(const GrElement& o) const {
    check_same_(o);
    return c_ == o.c_;
}

bool GrElement::operator<(const GrElement& o) const {
    return c_ < o.c_;
}

GrElement GrElement::inv() const {
    if (val() != 0)
        fail("NotAUnit", "element has positive valuation: " + str());
    std::int64_t p = s_->p;
    // inverse mod p via extended Euclid in F_p[t]
    FpPoly fbar(s_->n + 1), xbar(s_->n);
    for (int i = 0; i <= s_->n; ++i) fbar[i] = static_cast<std::int64_t>(s_->f[i] % p);
    for (int i = 0; i < s_->n; ++i) xbar[i] = static_cast<std::int64_t>(c_[i] % p);
    fp_trim(xbar);
    FpPoly ybar = fp_inverse_mod(xbar, fbar, p);
    std::vector<Int> yc(s_->n, 0);
    for (std::size_t i = 0; i < ybar.size(); ++i) yc[i] = ybar[i];
    GrElement y(s_, std::move(yc));
    // Hensel: y <- y(2 - x y), doubling p-adic precision each pass
    std::vector<Int> tc(s_->n, 0);
    tc[0] = Int(2) % s_->pa;
    GrElement two(s_, std::move(tc));
    for (int prec = 1; prec < s_->a; prec *= 2)
        y = y * (two - *this * y);
    return y;
}

GrElement GrElement::divided_by_p() const {
    std::vector<Int> c(c_);
    for (auto& x : c) {
        if (x % s_->p != 0)
            fail("BadInput", "exact division by p on a valuation-zero element");
        x /= s_->p;
    }
    return GrElement(s_, std::move(c));
}

GrElement GrElement::times_p_pow(int k) const {
    Int m = 1;
    for (int i = 0; i < k; ++i) m *= s_->p;
    std::vector<Int> c(c_);
    for (auto& x : c) x *= m;
    return GrElement(s_, std::move(c));
}

std::string GrElement::str() const {
    std::ostringstream os;
    bool first = true;
    for (int i = s_->n - 1; i >= 0; --i) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        if (i == 0 || c_[i] != 1) os << c_[i];
        if (i >= 1) os << "t";
        if (i >= 2) os << "^" << i;
    }
    if (first) os << "0";
    return os.str();
}

} // namespace lt
