#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stagedlt/galois.hpp"
#include "stagedlt/wire_fwd.hpp"

namespace lt {

// Finite rings with an explicit coordinate carrier: element = coordinate
// vector, coordinate i living in Z/mods[i], multiplication given by sparse
// structure constants on the basis vectors.  An optional explicit subset
// restricts the carrier (images, ideals); subsets are kept sorted and closed
// under addition and negation.
using Elem = std::vector<Int>;

struct FiniteRingObj {
    std::string name;
    std::vector<Int> mods;
    // (i, j) -> e_i * e_j expanded as sparse [(k, coeff)]
    std::vector<std::pair<std::pair<int, int>, std::vector<std::pair<int, Int>>>>
        sc;
    Elem unit;                  // coordinates of 1 (empty for the zero ring)
    std::vector<Elem> subset;   // empty = full coordinate space

    int dim() const { return static_cast<int>(mods.size()); }
    Int size() const;
    Elem zero() const;
    Elem reduce(Elem x) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    bool contains(const Elem& x) const;
    // all elements; refuses to enumerate past the guard
    std::vector<Elem> carrier() const;
    bool same_as(const FiniteRingObj& o) const;  // structural, names ignored
    std::string str() const;
};

FiniteRingObj fin_zero();
FiniteRingObj fin_zp(int p, int a);
FiniteRingObj fin_galois(const GaloisRing& G);
// base[x]/x^deg with block coordinates (x-power major)
FiniteRingObj fin_trunc_poly(const FiniteRingObj& base, int deg);
FiniteRingObj fin_product(const FiniteRingObj& A, const FiniteRingObj& B);
// the additive span of {g * a : g in gens, a in A} as a subset object
FiniteRingObj fin_ideal_span(const FiniteRingObj& A, const std::vector<Elem>& gens);

// Coordinate-linear map between carriers: y = M x reduced mod the target
// moduli.  Every structure map in this module is of this shape, so ring-map
// and module-map checks reduce to finite generator conditions.
struct RingMap {
    std::vector<std::vector<Int>> M;  // rows = target dim, cols = source dim
    std::vector<Int> tmods;
    int cols = 0;

    static RingMap identity(const FiniteRingObj& A);
    static RingMap zero_map(const FiniteRingObj& src, const FiniteRingObj& dst);
    Elem apply(const Elem& x) const;
    RingMap after(const RingMap& f) const;  // this composed with f
    bool equals(const RingMap& o) const;
    bool is_identity() const;
};

// M x is well defined on Z/mods coordinates
bool map_well_defined(const RingMap& f, const FiniteRingObj& src);
// additive + multiplicative + unital (unit clause skipped when the target
// carries no unit); complete for coordinate-linear maps by bilinearity
bool is_ring_map(const RingMap& f, const FiniteRingObj& src,
                 const FiniteRingObj& dst);
bool map_injective(const RingMap& f, const FiniteRingObj& src);
bool map_surjective(const RingMap& f, const FiniteRingObj& src,
                    const FiniteRingObj& dst);
bool map_bijective(const RingMap& f, const FiniteRingObj& src,
                   const FiniteRingObj& dst);

// Morphism of sequential towers with a germ offset: component comp[k] feeds
// target stage k from domain stage dom[k] (dom[k] = k is the strict levelwise
// case; dom[k] > k lets quotient-to-stage and shift maps exist).
struct PipeMorphism0 {
    std::vector<int> dom;
    std::vector<RingMap> comp;
};

struct PipeDiagram;

PipeMorphism0 level_morph0(std::vector<RingMap> comp);
PipeMorphism0 identity_morph0(const PipeDiagram& X);
PipeMorphism0 morph0_compose(const PipeMorphism0& g, const PipeMorphism0& f);
bool morph0_equal(const PipeMorphism0& f, const PipeMorphism0& g,
                  const PipeDiagram& X);

// Sequential pro/ind tower:
//   length 0: a pro-system obs[0] <- obs[1] <- ... (pro[k]: obs[k+1] -> obs[k])
//   length 1: an outer pro-system (index alpha) of inner ind-systems (index
//   beta) of length-0 towers; ind[alpha][beta] maps column (alpha,beta) into
//   (alpha,beta+1), outer[alpha][beta] maps column (alpha+1,beta) down to
//   (alpha,beta).
// All index sets are N with successor structure maps, evaluated inside an
// explicit depth bound.
struct PipeDiagram {
    int length = 0;
    bool rigid = false;
    int depth_bound = 0;
    // length 0
    std::vector<FiniteRingObj> obs;
    std::vector<RingMap> pro;
    // length 1
    std::vector<std::vector<PipeDiagram>> cols;      // cols[alpha][beta]
    std::vector<std::vector<PipeMorphism0>> ind;     // ind[alpha][beta]
    std::vector<std::vector<PipeMorphism0>> outer;   // outer[alpha][beta]
};

PipeDiagram const_diagram(const FiniteRingObj& A, int stages);
PipeDiagram chain_diagram(std::vector<FiniteRingObj> obs,
                          std::vector<RingMap> pro, bool strict = true);
// {base[x]/x, base[x]/x^2, ...} with truncation transition maps
PipeDiagram series_tower(const GaloisRing& R, int stages);
// constant outer pro-system over a single ind-system of towers
PipeDiagram pro_of_ind(std::vector<PipeDiagram> entries,
                       std::vector<PipeMorphism0> ind_maps, int outer_stages);
PipeDiagram product_diagram(const PipeDiagram& X, const PipeDiagram& Y);
bool diagram_equal(const PipeDiagram& X, const PipeDiagram& Y);
// structure maps well defined and commuting within the depth bound
void validate_diagram(const PipeDiagram& X);

// pro[to] o ... o pro[from-1] : obs[from] -> obs[to], identity when from == to
RingMap pro_composite(const PipeDiagram& X, int from, int to);

struct Realization {
    FiniteRingObj obj;
    bool stabilized = false;  // enlarging the depth by one provably changes nothing
    bool ring_level = true;   // false when an ind map in the window is not unital
};

Realization realize(const PipeDiagram& X, int depth);
// the realized comparison map at depth, as a map of realization carriers
RingMap realize0_map(const PipeMorphism0& m, const PipeDiagram& X, int depth);

struct PipeMorphism {
    std::vector<std::vector<PipeMorphism0>> cols;  // [alpha][beta]
};

RingMap realize_map(const PipeMorphism& m, const PipeDiagram& X,
                    const PipeDiagram& Y, int depth);

struct TowerReport {
    bool pass = true;
    int outer = -1;
    int inner = -1;
    std::string detail;
};

// injectivity of every realized inclusion of an inner stage into its colimit
TowerReport check_fine(const PipeDiagram& X, int depth);
// surjectivity of the realized limit onto every stage
TowerReport check_cofine(const PipeDiagram& X, int depth);

struct Cofineify {
    PipeDiagram evim;
    PipeMorphism0 to_original;
    bool stabilized = false;
};

// eventual-image tower of a length-0 diagram inside the depth window
Cofineify cofineify0(const PipeDiagram& X, int depth);

// builds i_m(X) one length up; only m = 0 (constant reindexing on the outer
// axes) and m = 1 (original tower pushed to the outer axis) exist for a
// length-0 input
PipeDiagram include_level(const PipeDiagram& X, int m);

struct ClogResult {
    PipeDiagram Q0, Q1;
    PipeMorphism quot;
    std::vector<Int> kernel_sizes;  // stage n = 1..depth, inside the window
    bool realized_bijective = false;
};

// the two inclusions of the truncated power series tower, the levelwise
// quotient between them, and its kernel tower: a non-isomorphism whose
// realization is a bijection at every depth
ClogResult clog_example(const GaloisRing& R, int depth);

struct RigidPresentation {
    PipeDiagram diag;  // rigid-tagged tower of base-algebra quotients
    std::string base;
};

// replaces each stage A by the span of the ideal generators' images in A,
// with the restricted transition maps
RigidPresentation rigid_quotient(const RigidPresentation& S,
                                 const std::vector<std::vector<Elem>>& gen_images);

Json diagram_to_json(const PipeDiagram& X);
PipeDiagram diagram_from_json(const Json& j);

}  // namespace lt
