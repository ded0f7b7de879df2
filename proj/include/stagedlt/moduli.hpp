#pragma once

// Staged deformations of the residue formal group, their validation, the
// classifying-map solver against the Hazewinkel versal law, and changes of
// Lubin-Tate coordinate system.

#include <string>
#include <vector>

#include "stagedlt/fgl.hpp"
#include "stagedlt/series.hpp"
#include "stagedlt/staged.hpp"
#include "stagedlt/wire.hpp"

namespace lt {

// A deformation presented on the standard staged family.  One staged ring
// carries all the stages R_0 -> R_1 -> ... -> R_n; `connect[s-1]` is the
// connecting map R_{s-1} -> R_s (canonically the stage promotion, but any
// staged map is accepted); `laws[s]` is the formal group law F_s over R_s.
// `heights` is the claimed height per localized stage, h_1 ... h_n; it
// usually coincides with the structural list ring.spec().heights, and
// validation measures the laws against the claim.  The residue map
// R_0 -> k is the canonical coefficient reduction modulo (p, u_1, ...):
// F_0 must reduce to the residue law there.
struct StagedDeformation {
    StagedRing ring;
    std::vector<int> heights;
    std::vector<StagedMap> connect;  // connect[s-1]: stage s-1 -> stage s
    std::vector<Fgl> laws;           // laws[s] = F_s at stage s
};

// The canonical deformation: identity connecting maps, laws = the stagewise
// promotions of the Hazewinkel versal law.
StagedDeformation tautological_deformation(const StagedRing& R);

// The deformation classified by (g0, phi0): F_0 is the conjugate by phi0 of
// the pushforward of the versal law along g0, pushed up the stages through
// the canonical promotions.  phi0 must be substitutable with unit linear
// coefficient.
StagedDeformation induced_deformation(const StagedRing& R, const StagedMap& g0,
                                      const TruncSeries1& phi0);

struct DeformationReport {
    bool pass = true;
    std::string detail;  // first violation; empty when pass
};

// Checks, in order: shape, residue reduction of F_0, pushforward
// compatibility of each F_s with F_{s-1} along connect[s-1], and the
// measured height of every stage against the claimed list.
DeformationReport validate_deformation(const StagedDeformation& D);

// One linear step of the stage-0 solver.  kind 'b': a coefficient of the
// isomorphism, pivot a binomial unit; kind 'y': a deformation parameter,
// pivot the unit derivative of the versal p-series coefficient.
struct SolveStep {
    int degree = 0;
    char kind = 'b';
    bool unit_pivot = false;
};

// The classifying data of a deformation: f[s] maps the universal stage-s
// ring to R_s, phi[s] is the isomorphism from F_s to the pullback of the
// versal law along f[s].  `steps` records every linear step the stage-0
// solver took, for the uniqueness audit.
struct ClassifyingMap {
    std::vector<StagedMap> f;
    std::vector<TruncSeries1> phi;
    std::vector<SolveStep> steps;
};

// Computes the unique classifying pair.  Stage 0 runs a successive
// approximation in the (x-degree, ideal-power) bifiltration; stage s checks
// the measured height, extends f through the localization (inversion of the
// u_{h_s}-image) and the completion, and pushes phi forward.  Throws
// HeightMismatch, PrecisionExhausted, or NonLiftable.
ClassifyingMap classify(const StagedDeformation& D);

// A change of Lubin-Tate coordinates and its inverse, one map per stage.
struct CoordinateChange {
    std::vector<StagedMap> fwd;  // fwd[s]: stage-s ring in u-coordinates -> in v-coordinates
    std::vector<StagedMap> inv;  // inv[s]: the two-sided inverse of fwd[s]
};

// v_images[t-1] is the image of u_t under the change map, written in the
// target presentation's generator symbols.  Verifies that the transported
// versal law still satisfies the Lubin-Tate coordinate congruences (else
// NotLubinTate), builds the stagewise maps and their inverses by fixed-point
// solution of the inversion equations, and asserts both composites are the
// identity on the generators and the inverted generators at every stage.
CoordinateChange change_coordinates(const StagedRing& R,
                                    const std::vector<StagedElement>& v_images);

// Componentwise equality: same stage, same family, identical images.
bool staged_map_equal(const StagedMap& f, const StagedMap& g);

// Extends f: (stage s-1) -> R_{s-1} to stage s through D's connecting map:
// the u_{h_s}-image must become invertible (else MapUndefined) and the
// images of the lower generators must stay in the stage ideal (else
// IdealEscape).
StagedMap extend_map(const StagedMap& f, int s, const StagedDeformation& D);

// Wire format.  Bundle: {"rings":[...], "maps":[...], "fgls":[...],
// "residue":{"p":..,"n":..}, "heights":[...]}.
Json staged_map_to_json(const StagedMap& m);
StagedMap staged_map_from_json(const StagedRing& src, const StagedRing& dst,
                               const Json& j);
Json deformation_to_json(const StagedDeformation& D);
StagedDeformation deformation_from_json(const Json& j);
Json classifying_to_json(const ClassifyingMap& C);

} // namespace lt
