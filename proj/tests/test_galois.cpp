#include <doctest.h>

#include <random>
#include <vector>

#include "stagedlt/galois.hpp"
#include "stagedlt/wire.hpp"

using lt::GaloisRing;
using lt::GrElement;
using lt::Int;

namespace {

// ---- independent reference implementations (the tests below freeze values
// ---- computed by these, then pin the frozen literals) ----

// multiply in Z[t], long-divide by monic f, reduce coordinates into [0, p^a)
std::vector<Int> omul(const std::vector<Int>& x, const std::vector<Int>& y,
                      const std::vector<Int>& f, const Int& pa) {
    int n = static_cast<int>(f.size()) - 1;
    std::vector<Int> z(2 * n - 1, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            z[i + j] += x[i] * y[j];
    for (int k = 2 * n - 2; k >= n; --k) {
        Int c = z[k];
        if (c == 0) continue;
        for (int i = 0; i <= n; ++i)
            z[k - n + i] -= c * f[i];
    }
    z.resize(n);
    for (auto& c : z) {
        c %= pa;
        if (c < 0) c += pa;
    }
    return z;
}

// next coordinate vector in odometer order; false once wrapped
bool onext(std::vector<Int>& c, const Int& pa) {
    for (auto& x : c) {
        x += 1;
        if (x < pa) return true;
        x = 0;
    }
    return false;
}

// exhaustive inverse search using omul only
bool osearch_inverse(const std::vector<Int>& x, const std::vector<Int>& f,
                     const Int& pa, std::vector<Int>& out) {
    int n = static_cast<int>(f.size()) - 1;
    std::vector<Int> one(n, 0);
    one[0] = 1;
    std::vector<Int> y(n, 0);
    do {
        if (omul(x, y, f, pa) == one) {
            out = y;
            return true;
        }
    } while (onext(y, pa));
    return false;
}

// first monic lift (c0 scanned in the outermost position) with no monic
// divisor of degree 1..n/2 mod p
bool odivides(const std::vector<Int>& g, const std::vector<Int>& f, std::int64_t p) {
    // remainder of f by monic g over F_p
    std::vector<Int> r = f;
    int dg = static_cast<int>(g.size()) - 1;
    for (int k = static_cast<int>(r.size()) - 1; k >= dg; --k) {
        Int c = r[k] % p;
        if (c == 0) continue;
        for (int i = 0; i <= dg; ++i) {
            r[k - dg + i] -= c * g[i];
            r[k - dg + i] %= p;
        }
    }
    for (int i = 0; i < dg; ++i)
        if (r[i] % p != 0) return false;
    return true;
}

// lex order on (c0,...,c_{n-1}) with c0 most significant: last entry fastest
bool onext_lex(std::vector<Int>& c, const Int& pa) {
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        *it += 1;
        if (*it < pa) return true;
        *it = 0;
    }
    return false;
}

std::vector<Int> odefault_poly(std::int64_t p, int n) {
    std::vector<Int> c(n, 0);
    Int pp = p;
    do {
        std::vector<Int> f(c);
        f.push_back(1);
        bool irred = true;
        for (int d = 1; irred && 2 * d <= n; ++d) {
            std::vector<Int> g(d, 0);
            do {
                std::vector<Int> gm(g);
                gm.push_back(1);
                if (odivides(gm, f, p)) {
                    irred = false;
                    break;
                }
            } while (onext(g, pp));
        }
        if (irred) return f;
    } while (onext_lex(c, pp));
    return {};
}

template <class F>
std::string thrown_code(F&& fn) {
    try {
        fn();
    } catch (const lt::DomainError& e) {
        return e.code();
    }
    return "";
}

GrElement rnd(const GaloisRing& R, std::mt19937& g) {
    std::vector<Int> c(static_cast<std::size_t>(R.n()));
    std::uniform_int_distribution<std::int64_t> d(0, 8 * R.p() * R.p() - 1);
    for (auto& x : c) x = d(g);
    return R.make(std::move(c));
}

} // namespace

TEST_CASE("default polynomial is the first irreducible lift") {
    // frozen from odefault_poly: p=2 n=2 -> t^2+t+1, p=3 n=2 -> t^2+1,
    // p=2 n=3 -> t^3+t^2+1
    CHECK(odefault_poly(2, 2) == std::vector<Int>{1, 1, 1});
    CHECK(odefault_poly(3, 2) == std::vector<Int>{1, 0, 1});
    CHECK(odefault_poly(2, 3) == std::vector<Int>{1, 0, 1, 1});

    CHECK(GaloisRing(2, 3, 2).spec().f == std::vector<Int>{1, 1, 1});
    CHECK(GaloisRing(3, 2, 2).spec().f == std::vector<Int>{1, 0, 1});
    CHECK(GaloisRing(2, 2, 3).spec().f == std::vector<Int>{1, 0, 1, 1});
    CHECK(GaloisRing(5, 1, 1).spec().f == std::vector<Int>{0, 1});

    for (std::int64_t p : {2, 3, 5})
        for (int n = 1; n <= 4; ++n)
            CHECK(GaloisRing(p, 2, n).spec().f == odefault_poly(p, n));
}

TEST_CASE("products match the long-division reference") {
    GaloisRing R(3, 2, 2); // default f = t^2+1
    auto x = R.make({1, 1});  // t+1
    auto y = R.make({8, 1});  // t-1
    // frozen from omul: (t+1)(t-1) = t^2-1 = -2 = 7 in (Z/9)[t]/(t^2+1)
    CHECK(omul(x.coords(), y.coords(), R.spec().f, R.spec().pa) == std::vector<Int>{7, 0});
    CHECK((x * y).coords() == std::vector<Int>{7, 0});

    GaloisRing S(2, 3, 2); // f = t^2+t+1
    auto z = S.make({1, 1});
    // frozen from omul: (t+1)^2 = t^2+2t+1 = (7t+7)+2t+1 = t mod 8
    CHECK(omul(z.coords(), z.coords(), S.spec().f, S.spec().pa) == std::vector<Int>{0, 1});
    CHECK((z * z).coords() == std::vector<Int>{0, 1});

    std::mt19937 g(31);
    for (int i = 0; i < 200; ++i) {
        auto u = rnd(R, g), v = rnd(R, g);
        CHECK((u * v).coords() == omul(u.coords(), v.coords(), R.spec().f, R.spec().pa));
        auto s = rnd(S, g), t = rnd(S, g);
        CHECK((s * t).coords() == omul(s.coords(), t.coords(), S.spec().f, S.spec().pa));
    }
}

TEST_CASE("inverses match exhaustive search") {
    GaloisRing R(2, 2, 2);
    // frozen from osearch_inverse: inv(t) = 3t+3 in (Z/4)[t]/(t^2+t+1)
    std::vector<Int> got;
    REQUIRE(osearch_inverse({0, 1}, R.spec().f, R.spec().pa, got));
    CHECK(got == std::vector<Int>{3, 3});
    CHECK(R.make({0, 1}).inv().coords() == std::vector<Int>{3, 3});

    // all 16 elements: unit iff the search finds an inverse, and inv() agrees
    std::vector<Int> c(2, 0);
    do {
        auto x = R.make(std::vector<Int>(c));
        std::vector<Int> y;
        bool has = osearch_inverse(c, R.spec().f, R.spec().pa, y);
        CHECK(x.is_unit() == has);
        if (has)
            CHECK(x.inv().coords() == y);
        else
            CHECK(thrown_code([&] { x.inv(); }) == "NotAUnit");
    } while (onext(c, R.spec().pa));
}

TEST_CASE("small worked examples") {
    GaloisRing W(2, 3, 1); // Z/8
    CHECK(W.from_int(3) * W.from_int(5) == W.from_int(7));
    CHECK(W.from_int(3).inv() == W.from_int(3));
    CHECK(W.from_int(6).val() == 1);

    GaloisRing F4(2, 1, 2); // f = t^2+t+1
    auto t = F4.make({0, 1});
    CHECK(t * t == F4.make({1, 1}));

    GaloisRing F3(3, 1, 1);
    CHECK(F3.from_int(2).inv() == F3.from_int(2));

    GaloisRing R(3, 2, 2);
    CHECK(R.make({6, 3}).val() == 1); // 3t + 6
}

TEST_CASE("two hundred random units invert exactly") {
    GaloisRing R(2, 3, 2);
    std::mt19937 g(23);
    int units = 0;
    while (units < 200) {
        auto x = rnd(R, g);
        if (!x.is_unit()) continue;
        ++units;
        CHECK(x * x.inv() == R.one());
    }
}

TEST_CASE("ring axioms hold on random samples") {
    std::mt19937 g(7);
    for (const auto& R : {GaloisRing(2, 3, 2), GaloisRing(3, 2, 2), GaloisRing(2, 2, 3)}) {
        for (int i = 0; i < 200; ++i) {
            auto x = rnd(R, g), y = rnd(R, g), z = rnd(R, g);
            CHECK((x + y) + z == x + (y + z));
            CHECK(x + y == y + x);
            CHECK((x * y) * z == x * (y * z));
            CHECK(x * y == y * x);
            CHECK(x * (y + z) == x * y + x * z);
            CHECK(x + R.zero() == x);
            CHECK(x * R.one() == x);
            CHECK(x + (-x) == R.zero());
            CHECK(x - y == x + (-y));
        }
    }
}

TEST_CASE("valuation is additive under products") {
    GaloisRing R(2, 3, 2);
    CHECK(R.zero().val() == 3);
    CHECK(R.one().val() == 0);
    CHECK(R.from_int(2).val() == 1);
    CHECK(R.from_int(4).val() == 2);
    CHECK(R.from_int(6).val() == 1);
    CHECK(R.make({2, 4}).val() == 1);

    std::mt19937 g(11);
    for (int i = 0; i < 300; ++i) {
        auto x = rnd(R, g), y = rnd(R, g);
        CHECK((x * y).val() == std::min(x.val() + y.val(), R.a()));
        CHECK((x + y).val() >= std::min(x.val(), y.val()));
        CHECK(x.is_unit() == (x.val() == 0));
        if (x.is_unit()) CHECK(x.inv() * x == R.one());
    }
}

TEST_CASE("exact division by p undoes multiplication") {
    GaloisRing R(3, 2, 2);
    std::mt19937 g(13);
    for (int i = 0; i < 100; ++i) {
        auto x = rnd(R, g);
        if (x.val() >= 1)
            CHECK(x.divided_by_p().times_p_pow(1) == x);
        else
            CHECK(thrown_code([&] { x.divided_by_p(); }) == "BadInput");
    }
    CHECK(R.from_int(-1) == R.from_int(8));
    CHECK(R.from_int(3).times_p_pow(1) == R.zero());
}

TEST_CASE("powers agree with repeated multiplication") {
    GaloisRing R(2, 3, 2);
    std::mt19937 g(17);
    for (int i = 0; i < 50; ++i) {
        auto x = rnd(R, g);
        auto acc = R.one();
        for (std::uint64_t k = 0; k <= 6; ++k) {
            CHECK(x.pow(k) == acc);
            acc = acc * x;
        }
    }
    CHECK(R.make({0, 1}).pow(3) == R.one()); // t^2+t+1 divides t^3-1
}

TEST_CASE("cross-ring arithmetic is rejected") {
    GaloisRing R(2, 2, 2), S(3, 2, 2);
    CHECK(thrown_code([&] { (void)(R.one() + S.one()); }) == "MixedRings");
    CHECK(thrown_code([&] { (void)(R.one() * S.one()); }) == "MixedRings");
    CHECK(thrown_code([&] { (void)(R.one() == S.one()); }) == "MixedRings");
    // same shape, different modulus polynomial
    GaloisRing A(3, 1, 2), B(3, 1, 2, {2, 1, 1});
    CHECK(A != B);
    CHECK(thrown_code([&] { (void)(A.one() + B.one()); }) == "MixedRings");
}

TEST_CASE("constructor rejects bad parameters") {
    CHECK(thrown_code([] { GaloisRing(4, 1, 1); }) == "BadInput");
    CHECK(thrown_code([] { GaloisRing(2, 0, 1); }) == "BadInput");
    CHECK(thrown_code([] { GaloisRing(2, 1, 0); }) == "BadInput");
    CHECK(thrown_code([] { GaloisRing(2, 1, 9); }) == "BadInput");
    CHECK(thrown_code([] { GaloisRing(2, 1, 2, {1, 0, 2}); }) == "BadInput"); // not monic
    CHECK(thrown_code([] { GaloisRing(2, 1, 2, {1, 0, 1}); }) == "BadInput"); // (t+1)^2
    CHECK(thrown_code([] { GaloisRing(2, 1, 2, {1, 1}); }) == "BadInput");    // wrong degree
}

TEST_CASE("rendering") {
    GaloisRing R(2, 3, 2);
    CHECK(R.make({1, 2}).str() == "2t + 1");
    CHECK(R.zero().str() == "0");
    CHECK(R.from_int(5).str() == "5");
    CHECK(R.make({0, 1}).str() == "t");
    CHECK(R.make({0, 3}).str() == "3t");
    CHECK(R.spec().describe() == "GR(2,3,2; f=t^2+t+1)");
    GaloisRing S(2, 2, 3);
    CHECK(S.spec().describe() == "GR(2,2,3; f=t^3+t^2+1)");
}

TEST_CASE("ring and element json round trips are byte exact") {
    GaloisRing R(2, 3, 2);
    lt::Json j = lt::ring_to_json(R.spec());
    CHECK(j.dump() == R"({"p":2,"a":3,"n":2,"f":[1,1,1]})");
    GaloisRing R2 = lt::ring_from_json(j);
    CHECK(R == R2);
    CHECK(lt::ring_to_json(R2.spec()).dump() == j.dump());

    auto x = R.make({1, 2});
    lt::Json e = lt::element_to_json(x);
    CHECK(e.dump() == "[1,2]");
    CHECK(lt::element_from_json(R, e) == x);

    CHECK(thrown_code([] { lt::ring_from_json(lt::Json::parse(R"({"p":2})")); }) == "UnknownFormat");
    CHECK(thrown_code([&] { lt::element_from_json(R, lt::Json::parse("[1]")); }) == "UnknownFormat");
    // defaulted modulus polynomial
    GaloisRing R3 = lt::ring_from_json(lt::Json::parse(R"({"p":2,"a":3,"n":2})"));
    CHECK(R3 == R);
}
