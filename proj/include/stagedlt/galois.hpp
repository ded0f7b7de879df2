#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "stagedlt/errors.hpp"

namespace lt {

using Int = boost::multiprecision::cpp_int;

// W(F_{p^n})/p^a presented as (Z/p^a)[t]/(f), with f monic of degree n and
// irreducible mod p.  Residues are cpp_int: word-sized storage at the moduli
// we actually run, arbitrary precision past that.
struct GaloisRingSpec {
    std::int64_t p = 0;
    int a = 0;
    int n = 0;
    std::vector<Int> f;   // constant term first, f.size() == n+1, f[n] == 1
    Int pa;               // p^a

    bool operator==(const GaloisRingSpec& o) const {
        return p == o.p && a == o.a && n == o.n && f == o.f;
    }
    std::string describe() const;
};

class GrElement;

class GaloisRing {
public:
    // Default f: the lexicographically least monic lift (c0,...,c_{n-1})
    // that is irreducible mod p.
    GaloisRing(std::int64_t p, int a, int n);
    GaloisRing(std::int64_t p, int a, int n, std::vector<Int> f);

    const GaloisRingSpec& spec() const { return *s_; }
    std::shared_ptr<const GaloisRingSpec> spec_ptr() const { return s_; }
    std::int64_t p() const { return s_->p; }
    int a() const { return s_->a; }
    int n() const { return s_->n; }

    GrElement zero() const;
    GrElement one() const;
    GrElement from_int(const Int& k) const;
    GrElement make(std::vector<Int> coords) const;

    bool operator==(const GaloisRing& o) const { return *s_ == *o.s_; }
    bool operator!=(const GaloisRing& o) const { return !(*this == o); }

private:
    std::shared_ptr<const GaloisRingSpec> s_;
};

class GrElement {
public:
    GrElement() = default;

    const std::vector<Int>& coords() const { return c_; }
    const GaloisRingSpec& ring() const { return *s_; }
    const std::shared_ptr<const GaloisRingSpec>& ring_ptr() const { return s_; }

    bool is_zero() const;
    int val() const;                  // p-adic valuation; val(0) = a
    bool is_unit() const { return val() == 0; }
    GrElement inv() const;            // NotAUnit if val > 0

    GrElement operator+(const GrElement& o) const;
    GrElement operator-(const GrElement& o) const;
    GrElement operator-() const;
    GrElement operator*(const GrElement& o) const;
    GrElement pow(std::uint64_t k) const;
    bool operator==(const GrElement& o) const;
    bool operator!=(const GrElement& o) const { return !(*this == o); }
    bool operator<(const GrElement& o) const;   // coordinate order, for containers

    GrElement divided_by_p() const;   // exact; requires val() >= 1
    GrElement times_p_pow(int k) const;

    std::string str() const;          // "2t + 1"

private:
    friend class GaloisRing;
    GrElement(std::shared_ptr<const GaloisRingSpec> s, std::vector<Int> c);
    void reduce_();
    void check_same_(const GrElement& o) const;

    std::shared_ptr<const GaloisRingSpec> s_;
    std::vector<Int> c_;
};

} // namespace lt
