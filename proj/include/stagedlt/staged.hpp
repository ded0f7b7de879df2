#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "stagedlt/galois.hpp"

namespace lt {

// Window parameters for the truncated model of an iterated
// localize-and-complete tower over W(k)[[u_1,...,u_{h-1}]].
struct TruncationProfile {
    int D = 8;            // numerator exponents live in [0, D)
    int M = 8;            // denominator exponent cap per inverted generator
    int Nx = 8;           // power-series truncation degree (formal group layer)
    std::vector<int> N;   // N[j] = completion depth of stage j+1

    bool operator==(const TruncationProfile& o) const {
        return D == o.D && M == o.M && Nx == o.Nx && N == o.N;
    }
};

// Stage 0 is W(k)[[u_1,...,u_{h-1}]] in the window; stage s inverts u_{heights[s-1]}
// and completes at I_{heights[s-1]} = (p, u_1, ..., u_{heights[s-1]-1}).
// Convention: u_0 = p and I_0 = (0), so a height-0 stage inverts p and
// performs no completion.
struct StagedRingSpec {
    GaloisRing coeff;
    int h = 1;
    std::vector<int> heights;   // weakly decreasing, entries in [0, h]
    TruncationProfile prof;

    int stages() const { return static_cast<int>(heights.size()); }
    bool operator==(const StagedRingSpec& o) const {
        return coeff == o.coeff && h == o.h && heights == o.heights && prof == o.prof;
    }
    // true if u_g (g = 0 means p) has been inverted by the given stage
    bool inverted_by(int g, int stage) const {
        for (int j = 0; j < stage && j < stages(); ++j)
            if (heights[j] == g) return true;
        return false;
    }
    std::string describe() const;
};

class StagedElement;

class StagedRing {
public:
    StagedRing(GaloisRing coeff, int h, std::vector<int> heights, TruncationProfile prof);

    const StagedRingSpec& spec() const { return *s_; }
    std::shared_ptr<const StagedRingSpec> spec_ptr() const { return s_; }
    int stages() const { return s_->stages(); }

    StagedElement zero(int stage = 0) const;
    StagedElement one(int stage = 0) const;
    StagedElement from_coeff(const GrElement& c, int stage = 0) const;
    StagedElement from_int(const Int& k, int stage = 0) const;
    StagedElement p_elem(int stage = 0) const;
    StagedElement gen(int i, int stage = 0) const;        // u_i, 1 <= i <= h-1
    StagedElement gen_inv(int i, int stage) const;        // u_i^{-1} (i = 0: p^{-1})
    StagedElement monomial(const GrElement& c, std::vector<int> e, int stage = 0) const;
    // raw constructor for tests and deserialization; normalizes
    StagedElement make(int stage, std::map<std::vector<int>, GrElement> terms,
                       std::vector<int> dens) const;

private:
    std::shared_ptr<const StagedRingSpec> s_;
};

// Fraction normal form: numerator monomials u^e with GrElement coefficients,
// one shared denominator exponent per generator (index 0 = p, i = u_i).
class StagedElement {
public:
    StagedElement() = default;

    const StagedRingSpec& ring() const { return *s_; }
    const std::shared_ptr<const StagedRingSpec>& ring_ptr() const { return s_; }
    int stage() const { return stage_; }
    bool is_zero() const { return num_.empty(); }
    const std::map<std::vector<int>, GrElement>& terms() const { return num_; }
    const std::vector<int>& dens() const { return den_; }

    StagedElement promote(int stage) const;

    StagedElement operator+(const StagedElement& o) const;
    StagedElement operator-(const StagedElement& o) const;
    StagedElement operator-() const;
    StagedElement operator*(const StagedElement& o) const;
    StagedElement operator*(const GrElement& c) const;
    StagedElement pow(std::uint64_t k) const;
    bool operator==(const StagedElement& o) const;
    bool operator!=(const StagedElement& o) const { return !(*this == o); }

    // largest j with every monomial of net I_t-degree >= j (capped); cap for 0
    int ideal_degree(int t) const;
    // representative of the class mod I_t: monomials of net I_t-degree >= 1
    // dropped (t < 1 is the zero ideal, returned unchanged)
    StagedElement mod_ideal(int t) const;
    // geometric-series inversion by recursive Weierstrass order detection
    StagedElement try_invert() const;
    // x = u_g^e * unit with unit invertible; g must be a completion-direction
    // generator at this stage
    std::pair<int, StagedElement> weierstrass_split(int g) const;

    std::string str() const;

private:
    friend class StagedRing;
    StagedElement(std::shared_ptr<const StagedRingSpec> s, int stage,
                  std::map<std::vector<int>, GrElement> num, std::vector<int> den);
    void normalize_();
    void check_same_(const StagedElement& o) const;
    StagedElement with_(std::map<std::vector<int>, GrElement> num, std::vector<int> den) const;
    StagedElement reduce_mod_ideal_(int t) const;   // drop monomials of net I_t-degree >= 1
    StagedElement slice_net_(int g, int nu) const;  // part with net u_g-exponent nu, shifted by u_g^{-nu}
    StagedElement invert_rec_(int level) const;

    std::shared_ptr<const StagedRingSpec> s_;
    int stage_ = 0;
    std::map<std::vector<int>, GrElement> num_;
    std::vector<int> den_;
};

// Ring map determined by generator images (p maps to p); denominators are
// pushed through try_invert on the image side.
struct StagedMap {
    std::shared_ptr<const StagedRingSpec> source;
    std::shared_ptr<const StagedRingSpec> target;
    std::vector<StagedElement> images;   // images[i-1] = image of u_i
    int stage = 0;                       // stage of the target where images live
};

StagedMap identity_map(const StagedRing& R, int stage);
StagedElement apply_staged_map(const StagedMap& m, const StagedElement& x);

} // namespace lt
