#pragma once

#include <string>
#include <vector>

#include "stagedlt/staged.hpp"

namespace lt {

// Power series in x over one staged ring, truncated at degree Nx (exclusive).
// Coefficients are held at a fixed stage; a substitutable series has zero
// constant term and may be plugged into another series.
class TruncSeries1 {
public:
    TruncSeries1(const StagedRing& R, int stage);               // zero series
    static TruncSeries1 identity(const StagedRing& R, int stage);   // x

    const StagedRing& ring() const { return ring_; }
    int stage() const { return stage_; }
    int xcap() const { return static_cast<int>(c_.size()); }    // Nx
    const StagedElement& coeff(int j) const;
    void set_coeff(int j, const StagedElement& v);
    bool is_zero() const;
    bool substitutable() const { return c_[0].is_zero(); }

    TruncSeries1 operator+(const TruncSeries1& o) const;
    TruncSeries1 operator-(const TruncSeries1& o) const;
    TruncSeries1 operator-() const;
    TruncSeries1 operator*(const TruncSeries1& o) const;
    TruncSeries1 scale(const StagedElement& c) const;
    TruncSeries1 pow(int k) const;
    TruncSeries1 at_stage(int s) const;
    bool operator==(const TruncSeries1& o) const;
    bool operator!=(const TruncSeries1& o) const { return !(*this == o); }

    std::string str() const;   // "2x + x^2"; ascending degree

private:
    void check_same_(const TruncSeries1& o) const;

    StagedRing ring_;
    int stage_;
    std::vector<StagedElement> c_;   // c_[j] = coefficient of x^j
};

// Two-variable analogue: coefficients at (i,j) with i + j < Nx.
class TruncSeries2 {
public:
    TruncSeries2(const StagedRing& R, int stage);               // zero series

    const StagedRing& ring() const { return ring_; }
    int stage() const { return stage_; }
    int xcap() const { return nx_; }
    const StagedElement& coeff(int i, int j) const;
    void set_coeff(int i, int j, const StagedElement& v);
    bool is_zero() const;

    TruncSeries2 operator+(const TruncSeries2& o) const;
    TruncSeries2 operator-(const TruncSeries2& o) const;
    TruncSeries2 operator*(const TruncSeries2& o) const;
    TruncSeries2 scale(const StagedElement& c) const;
    TruncSeries2 at_stage(int s) const;
    bool operator==(const TruncSeries2& o) const;
    bool operator!=(const TruncSeries2& o) const { return !(*this == o); }

    std::string str() const;   // graded order, x-major within a grade

private:
    void check_same_(const TruncSeries2& o) const;
    int idx_(int i, int j) const { return i * nx_ + j; }

    StagedRing ring_;
    int stage_;
    int nx_;
    std::vector<StagedElement> c_;   // row-major, entries with i + j >= nx_ unused
};

// f(g(x)) mod x^Nx; g must be substitutable.
TruncSeries1 compose(const TruncSeries1& f, const TruncSeries1& g);

// g with f(g(x)) = g(f(x)) = x mod x^Nx, solved degree by degree; the linear
// step at each degree divides by the leading coefficient, so NotAUnit
// surfaces exactly when b_1 is not invertible.
TruncSeries1 comp_inverse(const TruncSeries1& f);

// F(s(x), t(x)) for substitutable one-variable arguments.
TruncSeries1 eval2(const TruncSeries2& F, const TruncSeries1& s, const TruncSeries1& t);

// F(sx(x), sy(y)): substitute a pure-x series for x and a pure-y series for y.
TruncSeries2 eval2_sep(const TruncSeries2& F, const TruncSeries1& sx, const TruncSeries1& sy);

// f(G(x,y)) for a substitutable two-variable argument (G(0,0) = 0).
TruncSeries2 compose12(const TruncSeries1& f, const TruncSeries2& G);

} // namespace lt
