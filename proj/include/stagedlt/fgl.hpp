#pragma once

#include <optional>
#include <string>

#include "stagedlt/series.hpp"

namespace lt {

// Verdict of a structural check: pass, or the first violated identity.
struct FglReport {
    bool pass = true;
    std::string detail;
};

// Height detection result; a miss reports the search bound rather than
// claiming infinite height, since the window cannot certify that.
struct HeightResult {
    std::optional<int> value;
    int bound = 0;

    std::string str() const {
        return value ? std::to_string(*value)
                     : "> " + std::to_string(bound) + " (window-bounded)";
    }
};

// One-dimensional formal group law at truncation: a two-variable series
// satisfying unit, commutativity, and associativity up to degree Nx.
class Fgl {
public:
    explicit Fgl(TruncSeries2 F) : F_(std::move(F)) {}

    const TruncSeries2& series() const { return F_; }
    const StagedRing& ring() const { return F_.ring(); }
    int stage() const { return F_.stage(); }
    int xcap() const { return F_.xcap(); }

    Fgl at_stage(int s) const { return Fgl(F_.at_stage(s)); }
    bool operator==(const Fgl& o) const { return F_ == o.F_; }
    bool operator!=(const Fgl& o) const { return !(*this == o); }

private:
    TruncSeries2 F_;
};

// All FGL axioms at truncation; first violation reported with its degree.
FglReport fgl_validate(const Fgl& F);

Fgl fgl_additive(const StagedRing& R, int stage);          // x + y
Fgl fgl_multiplicative(const StagedRing& R, int stage);    // x + y + xy

// Height-h Honda law over a residue ring (coefficient precision a = 1):
// the universal p-typical law with v_h = 1 and all other v zero, reduced
// mod p.  Its p-series is x^{p^h}.
Fgl fgl_honda(const StagedRing& R, int h);

// Versal deformation over stage 0 in coordinates u_1..u_{h-1}: p-typical
// logarithm from the recursion p*l_m = Sigma_{i<m} l_i v_{m-i}^{p^i} with
// v_t = u_t (t < h), v_h = 1, computed over exact rationals, checked for
// p-integrality, then reduced into the window.
Fgl hazewinkel_deformation(const StagedRing& R);

// [k]_F(x) = F([k-1]_F(x), x), with [1] = x.
TruncSeries1 p_series(const Fgl& F, int k);

// Least t <= t_max whose p-series coefficient a_{p^t} is a unit modulo the
// stage ideal while every lower a_i lies inside it.
HeightResult fgl_height(const Fgl& F, int t_max);

// Property check on the p-series: a_i in the stage-t ideal for i < n and
// a_n a unit of the ring itself.
FglReport check_star(const Fgl& F, int t, int n);

// Coordinate congruence [p](x) = u_t x^{p^t} mod (p, u_1..u_{t-1}, x^{1+p^t}).
FglReport check_lt_coordinate(const Fgl& F, int t);

// phi^{-1}(F(phi x, phi y)) for an invertible substitutable phi.
Fgl conjugate(const Fgl& F, const TruncSeries1& phi);

// Push every coefficient through a staged ring map.
Fgl fgl_map(const StagedMap& m, const Fgl& F);

} // namespace lt
