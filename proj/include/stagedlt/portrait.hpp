#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stagedlt/errors.hpp"
#include "stagedlt/wire_fwd.hpp"

namespace lt {

// The sample coordinate rings, in pipeline order: a one-variable power series
// ring and its Laurent localization, then the two-variable ring, its
// y-localization, and the x-adic completion of that. CXKXX is the intermediate
// reached by completing first; it is not addressable by name, only through the
// completion action.
enum class ExampleRing { KX, XKX, KXX, YKXX, YKXXC, CXKXX };

ExampleRing example_by_name(const std::string& name);
std::string example_name(ExampleRing r);

// A node of the abbreviated ideal graph. Closed nodes are the powers of the
// maximal ideal, Prime nodes the powers of a named principal prime, Family
// nodes the powers of an unnamed generic prime, Generic the zero ideal.
enum class NodeKind { Closed, Prime, Family, Generic };

struct PortraitNode {
    NodeKind kind = NodeKind::Generic;
    int pow = 1;
    std::string gen;
    int level = 0;
    std::string label() const;
};

// Ideal graph: nodes sorted by level then label, edges the full strict
// containment relation directed from the smaller ideal to the containing one.
struct PortraitGraph {
    ExampleRing ring = ExampleRing::KX;
    int depth = 0;
    std::vector<PortraitNode> nodes;
    std::vector<std::pair<int, int>> edges;
};

// factored principal ideal: product of powers of distinguished generators;
// an empty factor list is the unit ideal
struct IdealFactor {
    std::string gen;
    int mult = 1;
};
struct IdealSpec {
    std::vector<IdealFactor> factors;
};

PortraitGraph portrait_example(const std::string& name, int depth);

// indices into G.nodes of the closure of the point cut out by I
std::vector<int> closure(const PortraitGraph& G, const IdealSpec& I);

// invert gen: drop every node whose radical contains gen, raise the
// surviving levels by one; applying twice is the identity
PortraitGraph localize_action(const PortraitGraph& G, const std::string& gen);

// complete along the gen-chain: keep the nodes distinguished by their trace
// on {(gen), (gen^2), ...}; levels are unchanged
PortraitGraph complete_action(const PortraitGraph& G, const std::string& gen);

// nodes of level <= n with the induced edges
PortraitGraph filtration_level(const PortraitGraph& G, int n);

// format "dot" or "json"; output is byte-deterministic
std::string export_graph(const PortraitGraph& G, const std::string& format);

Json portrait_to_json(const PortraitGraph& G);

} // namespace lt
