#include "stagedlt/fgl.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace lt {

namespace {

using Rat = boost::multiprecision::cpp_rational;
using UE = std::vector<int>;          // exponents of u_1..u_{h-1}
using QPoly = std::map<UE, Rat>;      // sparse rational polynomial, ordered

QPoly qp_const(int nvars, const Rat& c) {
    QPoly r;
    if (c != 0) r.emplace(UE(static_cast<std::size_t>(nvars), 0), c);
    return r;
}

void qp_addto(QPoly& a, const QPoly& b) {
    for (const auto& [e, q] : b) {
        auto it = a.find(e);
        if (it == a.end()) {
            a.emplace(e, q);
        } else {
            it->second += q;
            if (it->second == 0) a.erase(it);
        }
    }
}

QPoly qp_mul(const QPoly& a, const QPoly& b) {
    QPoly r;
    for (const auto& [e1, q1] : a) {
        for (const auto& [e2, q2] : b) {
            UE e = e1;
            for (std::size_t k = 0; k < e.size(); ++k) e[k] += e2[k];
            Rat q = q1 * q2;
            auto it = r.find(e);
            if (it == r.end()) {
                r.emplace(std::move(e), std::move(q));
            } else {
                it->second += q;
                if (it->second == 0) r.erase(it);
            }
        }
    }
    return r;
}

QPoly qp_scale(const QPoly& a, const Rat& c) {
    QPoly r;
    if (c == 0) return r;
    for (const auto& [e, q] : a) r.emplace(e, q * c);
    return r;
}

QPoly qp_pow(const QPoly& a, std::int64_t k, int nvars) {
    QPoly r = qp_const(nvars, 1);
    QPoly b = a;
    while (k) {
        if (k & 1) r = qp_mul(r, b);
        k >>= 1;
        if (k) b = qp_mul(b, b);
    }
    return r;
}

// one-variable series over QPoly, index = degree
using QS1 = std::vector<QPoly>;

QS1 qs_mul(const QS1& A, const QS1& B, int cap) {
    QS1 r(static_cast<std::size_t>(cap));
    for (int i = 0; i < cap && i < static_cast<int>(A.size()); ++i) {
        if (A[static_cast<std::size_t>(i)].empty()) continue;
        for (int j = 0; i + j < cap && j < static_cast<int>(B.size()); ++j) {
            if (B[static_cast<std::size_t>(j)].empty()) continue;
            qp_addto(r[static_cast<std::size_t>(i + j)],
                     qp_mul(A[static_cast<std::size_t>(i)], B[static_cast<std::size_t>(j)]));
        }
    }
    return r;
}

QS1 qs_pow(const QS1& A, std::int64_t k, int cap, int nvars) {
    QS1 r(static_cast<std::size_t>(cap));
    r[0] = qp_const(nvars, 1);
    QS1 b = A;
    while (k) {
        if (k & 1) r = qs_mul(r, b, cap);
        k >>= 1;
        if (k) b = qs_mul(b, b, cap);
    }
    return r;
}

// two-variable triangular series over QPoly
struct QS2 {
    int nx;
    std::vector<QPoly> c;
    explicit QS2(int n) : nx(n), c(static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {}
    QPoly& at(int i, int j) { return c[static_cast<std::size_t>(i * nx + j)]; }
    const QPoly& at(int i, int j) const { return c[static_cast<std::size_t>(i * nx + j)]; }
};

struct SparseTerm {
    int deg;
    bool on_y;
    const QPoly* coeff;
};

Int qmodinv(Int v, const Int& m) {
    v %= m;
    if (v < 0) v += m;
    Int r0 = m, r1 = v, s0 = 0, s1 = 1;
    while (r1 != 0) {
        Int q = r0 / r1;
        r0 -= q * r1;
        std::swap(r0, r1);
        s0 -= q * s1;
        std::swap(s0, s1);
    }
    if (r0 != 1)
        fail("BadInput", "modular inverse of a non-unit residue");
    s0 %= m;
    if (s0 < 0) s0 += m;
    return s0;
}

// Common core: the p-typical law with v_t = u_t for t < h (deformation mode)
// or v_t = 0 for t != h, and v_h = 1 in both.  Computed over exact rationals,
// verified p-integral, reduced into the window at stage 0.
Fgl build_ptypical(const StagedRing& R, int h_eff, bool deformation) {
    const StagedRingSpec& spec = R.spec();
    std::int64_t p = spec.coeff.p();
    int nx = spec.prof.Nx;
    int nvars = spec.h - 1;
    std::int64_t ph = 1;
    for (int i = 0; i < h_eff; ++i) {
        ph *= p;
        if (ph >= nx)
            fail("PrecisionExhausted",
                 "window degree " + std::to_string(nx) + " cannot detect height " +
                     std::to_string(h_eff));
    }
    // substituted Hazewinkel generator v_t
    auto w_of = [&](int t) -> QPoly {
        if (t == h_eff) return qp_const(nvars, 1);
        if (deformation && t < h_eff) {
            UE e(static_cast<std::size_t>(nvars), 0);
            e[static_cast<std::size_t>(t - 1)] = 1;
            return {{std::move(e), Rat(1)}};
        }
        return {};
    };
    // logarithm coefficients: p*l_m = Sigma_{i<m} l_i v_{m-i}^{p^i}
    std::vector<QPoly> l{qp_const(nvars, 1)};
    std::vector<std::int64_t> pm{1};
    while (pm.back() * p < nx) {
        int m = static_cast<int>(l.size());
        pm.push_back(pm.back() * p);
        QPoly s;
        for (int i = 0; i < m; ++i) {
            QPoly w = w_of(m - i);
            if (w.empty()) continue;
            qp_addto(s, qp_mul(l[static_cast<std::size_t>(i)], qp_pow(w, pm[static_cast<std::size_t>(i)], nvars)));
        }
        l.push_back(qp_scale(s, Rat(1, p)));
    }
    // exp = compositional inverse of log(x) = x + Sigma_m l_m x^{p^m}, solved
    // degree by degree (leading coefficient 1)
    QS1 E(static_cast<std::size_t>(nx));
    E[1] = qp_const(nvars, 1);
    for (int n = 2; n < nx; ++n) {
        QPoly acc;   // coefficient n of Sigma_{m>=1} l_m E^{p^m}
        for (std::size_t m = 1; m < l.size(); ++m) {
            if (l[m].empty()) continue;
            QS1 P = qs_pow(E, pm[m], n + 1, nvars);
            if (!P[static_cast<std::size_t>(n)].empty())
                qp_addto(acc, qp_mul(l[m], P[static_cast<std::size_t>(n)]));
        }
        E[static_cast<std::size_t>(n)] = qp_scale(acc, Rat(-1));
    }
    // F = exp(log x + log y): iterate sparse multiplication by S = log x + log y
    QPoly one_q = qp_const(nvars, 1);
    std::vector<SparseTerm> sterms;
    sterms.push_back({1, false, &one_q});
    sterms.push_back({1, true, &one_q});
    for (std::size_t m = 1; m < l.size(); ++m) {
        if (l[m].empty()) continue;
        sterms.push_back({static_cast<int>(pm[m]), false, &l[m]});
        sterms.push_back({static_cast<int>(pm[m]), true, &l[m]});
    }
    QS2 FQ(nx), P(nx);
    P.at(0, 0) = one_q;
    for (int k = 1; k < nx; ++k) {
        QS2 Pn(nx);
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; i + j < nx; ++j) {
                const QPoly& v = P.at(i, j);
                if (v.empty()) continue;
                for (const auto& t : sterms) {
                    int i2 = i + (t.on_y ? 0 : t.deg);
                    int j2 = j + (t.on_y ? t.deg : 0);
                    if (i2 + j2 >= nx) continue;
                    qp_addto(Pn.at(i2, j2), qp_mul(v, *t.coeff));
                }
            }
        }
        P = std::move(Pn);   // S^k
        const QPoly& ek = E[static_cast<std::size_t>(k)];
        if (ek.empty()) continue;
        for (int i = 0; i < nx; ++i)
            for (int j = 0; i + j < nx; ++j)
                if (!P.at(i, j).empty())
                    qp_addto(FQ.at(i, j), qp_mul(P.at(i, j), ek));
    }
    // p-integrality audit, then reduction into the window
    const Int& pa = spec.coeff.spec().pa;
    int D = spec.prof.D;
    TruncSeries2 F(R, 0);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; i + j < nx; ++j) {
            const QPoly& q = FQ.at(i, j);
            if (q.empty()) continue;
            StagedElement v = R.zero(0);
            for (const auto& [e, c] : q) {
                Int den = boost::multiprecision::denominator(c);
                Int num = boost::multiprecision::numerator(c);
                if (den % p == 0)
                    fail("IntegralityFailure",
                         "coefficient of x^" + std::to_string(i) + "y^" + std::to_string(j) +
                             " has p in its denominator");
                for (int ev : e)
                    if (ev >= D)
                        fail("BadInput",
                             "window exponent cap " + std::to_string(D) +
                                 " is too small for the deformation (needs u-degree " +
                                 std::to_string(ev) + ")");
                Int cc = (num % pa) * qmodinv(den, pa) % pa;
                if (cc < 0) cc += pa;
                if (cc == 0) continue;
                v = v + R.monomial(spec.coeff.from_int(cc), e, 0);
            }
            if (!v.is_zero()) F.set_coeff(i, j, v);
        }
    }
    return Fgl(std::move(F));
}

} // namespace

Fgl fgl_honda(const StagedRing& R, int h) {
    if (h < 1)
        fail("BadInput", "height must be >= 1");
    if (R.spec().coeff.a() != 1)
        fail("BadInput", "Honda laws live over residue rings: need precision a = 1");
    return build_ptypical(R, h, false);
}

Fgl hazewinkel_deformation(const StagedRing& R) {
    return build_ptypical(R, R.spec().h, true);
}

} // namespace lt
