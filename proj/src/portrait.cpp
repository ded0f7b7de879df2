#include "stagedlt/portrait.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>

namespace lt {
namespace {

struct RingInfo {
    const char* name;      // addressable name, empty for action-only states
    const char* display;   // shown in exports
    bool two_var;          // carries the y / family / closed-point directions
    bool x_inverted, y_inverted, x_completed;
};

const RingInfo& info(ExampleRing r) {
    static const RingInfo table[] = {
        {"kx", "k[[x]]", false, false, false, false},
        {"xkx", "k((x))", false, true, false, false},
        {"kxx", "k[[x,y]]", true, false, false, false},
        {"ykxx", "y^-1 k[[x,y]]", true, false, true, false},
        {"ykxxc", "(y^-1 k[[x,y]])^(x)", true, false, true, true},
        {"", "(k[[x,y]])^(x)", true, false, false, true},
    };
    return table[static_cast<int>(r)];
}

bool gen_inverted(const RingInfo& ri, const std::string& gen) {
    return (gen == "x" && ri.x_inverted) || (gen == "y" && ri.y_inverted);
}

// containment of the underlying ideals, proper: a < b
bool contained(const PortraitNode& a, const PortraitNode& b) {
    if (a.kind == NodeKind::Generic) return b.kind != NodeKind::Generic;
    if (b.kind == NodeKind::Generic) return false;
    if (b.kind == NodeKind::Closed) {
        if (a.kind == NodeKind::Closed) return b.pow < a.pow;
        return b.pow <= a.pow;  // g^k lies in m^j exactly when j <= k
    }
    if (a.kind != b.kind) return false;
    if (a.kind == NodeKind::Prime && a.gen != b.gen) return false;
    return b.pow < a.pow;
}

void finalize(PortraitGraph& G) {
    std::stable_sort(G.nodes.begin(), G.nodes.end(),
                     [](const PortraitNode& a, const PortraitNode& b) {
                         if (a.level != b.level) return a.level < b.level;
                         return a.label() < b.label();
                     });
    G.edges.clear();
    int n = static_cast<int>(G.nodes.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && contained(G.nodes[static_cast<std::size_t>(i)],
                                    G.nodes[static_cast<std::size_t>(j)]))
                G.edges.emplace_back(i, j);
}

PortraitGraph base_graph(ExampleRing r, int depth) {
    PortraitGraph G;
    G.ring = r;
    G.depth = depth;
    if (!info(r).two_var) {
        for (int k = 1; k <= depth; ++k)
            G.nodes.push_back({NodeKind::Prime, k, "x", -1});
        G.nodes.push_back({NodeKind::Generic, 1, "", 0});
    } else {
        for (int k = 1; k <= depth; ++k) {
            G.nodes.push_back({NodeKind::Closed, k, "", -1});
            G.nodes.push_back({NodeKind::Prime, k, "x", 0});
            G.nodes.push_back({NodeKind::Prime, k, "y", 0});
            G.nodes.push_back({NodeKind::Family, k, "", 0});
        }
        G.nodes.push_back({NodeKind::Generic, 1, "", 1});
    }
    finalize(G);
    return G;
}

bool radical_contains(const PortraitNode& n, const std::string& gen) {
    switch (n.kind) {
        case NodeKind::Closed: return true;  // gen is one of the coordinates
        case NodeKind::Prime: return n.gen == gen;
        case NodeKind::Family:
        case NodeKind::Generic: return false;
    }
    return false;
}

int find_node(const PortraitGraph& G, const PortraitNode& want) {
    for (std::size_t i = 0; i < G.nodes.size(); ++i) {
        const PortraitNode& n = G.nodes[i];
        if (n.kind == want.kind && n.pow == want.pow && n.gen == want.gen)
            return static_cast<int>(i);
    }
    return -1;
}

} // namespace

std::string PortraitNode::label() const {
    switch (kind) {
        case NodeKind::Closed:
            return pow == 1 ? "(x,y)" : "(x,y)^" + std::to_string(pow);
        case NodeKind::Prime:
            return pow == 1 ? "(" + gen + ")"
                            : "(" + gen + "^" + std::to_string(pow) + ")";
        case NodeKind::Family:
            return pow == 1 ? "I" : "I^" + std::to_string(pow);
        case NodeKind::Generic:
            return "(0)";
    }
    return "";
}

ExampleRing example_by_name(const std::string& name) {
    for (ExampleRing r : {ExampleRing::KX, ExampleRing::XKX, ExampleRing::KXX,
                          ExampleRing::YKXX, ExampleRing::YKXXC})
        if (name == info(r).name) return r;
    fail("UnknownExample", "no sample ring is named '" + name + "'");
}

std::string example_name(ExampleRing r) { return info(r).name; }

PortraitGraph portrait_example(const std::string& name, int depth) {
    if (depth < 1) fail("BadInput", "depth must be at least 1");
    switch (example_by_name(name)) {
        case ExampleRing::KX: return base_graph(ExampleRing::KX, depth);
        case ExampleRing::XKX:
            return localize_action(base_graph(ExampleRing::KX, depth), "x");
        case ExampleRing::KXX: return base_graph(ExampleRing::KXX, depth);
        case ExampleRing::YKXX:
            return localize_action(base_graph(ExampleRing::KXX, depth), "y");
        default:
            return complete_action(
                localize_action(base_graph(ExampleRing::KXX, depth), "y"), "x");
    }
}

std::vector<int> closure(const PortraitGraph& G, const IdealSpec& I) {
    const RingInfo& ri = info(G.ring);
    if (!ri.two_var)
        fail("BadInput", "closure queries need the two-variable family");
    std::set<std::string> seen;
    for (const IdealFactor& f : I.factors) {
        if (f.gen.empty()) fail("NotFactored", "factor with empty generator");
        if (f.mult < 1)
            fail("NotFactored", "factor " + f.gen + " has multiplicity " +
                                    std::to_string(f.mult));
        if (!seen.insert(f.gen).second)
            fail("NotFactored", "factor " + f.gen + " repeats; collect associate"
                                " factors into one power");
    }
    std::set<int> out;
    int total = 0;
    for (const IdealFactor& f : I.factors) {
        bool unit = gen_inverted(ri, f.gen) ||
                    (ri.x_completed && f.gen != "x");  // after completion only
                                                       // the x-chain survives
        if (unit) continue;
        total += f.mult;  // every generator is distinguished of order one
        PortraitNode probe;
        probe.kind = (f.gen == "x" || f.gen == "y") ? NodeKind::Prime
                                                    : NodeKind::Family;
        probe.gen = probe.kind == NodeKind::Prime ? f.gen : "";
        for (int k = 1; k <= std::min(f.mult, G.depth); ++k) {
            probe.pow = k;
            int idx = find_node(G, probe);
            if (idx >= 0) out.insert(idx);
        }
    }
    PortraitNode cp;
    cp.kind = NodeKind::Closed;
    cp.gen = "";
    for (int k = 1; k <= std::min(total, G.depth); ++k) {
        cp.pow = k;
        int idx = find_node(G, cp);
        if (idx >= 0) out.insert(idx);
    }
    return std::vector<int>(out.begin(), out.end());
}

PortraitGraph localize_action(const PortraitGraph& G, const std::string& gen) {
    const RingInfo& ri = info(G.ring);
    bool valid = (gen == "x" && !ri.two_var) ||
                 (gen == "y" && ri.two_var && !ri.x_completed) ||
                 (gen == "y" && G.ring == ExampleRing::YKXXC) ||
                 (gen == "y" && G.ring == ExampleRing::CXKXX);
    if (!valid)
        fail("BadInput", "cannot invert '" + gen + "' in " + ri.display);
    if (gen_inverted(ri, gen)) return G;

    PortraitGraph out;
    out.depth = G.depth;
    if (G.ring == ExampleRing::KX) out.ring = ExampleRing::XKX;
    else if (G.ring == ExampleRing::KXX) out.ring = ExampleRing::YKXX;
    else out.ring = ExampleRing::YKXXC;  // CXKXX + y
    for (const PortraitNode& n : G.nodes)
        if (!radical_contains(n, gen)) {
            PortraitNode m = n;
            m.level += 1;
            out.nodes.push_back(m);
        }
    finalize(out);
    return out;
}

PortraitGraph complete_action(const PortraitGraph& G, const std::string& gen) {
    const RingInfo& ri = info(G.ring);
    if (gen != "x" || ri.x_inverted)
        fail("BadInput", "cannot complete " + std::string(ri.display) + " along '" + gen + "'");
    if (ri.x_completed) return G;

    PortraitGraph out;
    out.depth = G.depth;
    if (G.ring == ExampleRing::KX) out.ring = ExampleRing::KX;
    else if (G.ring == ExampleRing::KXX) out.ring = ExampleRing::CXKXX;
    else out.ring = ExampleRing::YKXXC;  // YKXX + x
    for (const PortraitNode& n : G.nodes) {
        // the trace of a node on the x-chain determines its class; only the
        // x-powers and the zero ideal meet the chain in distinct sets
        bool keep = n.kind == NodeKind::Generic ||
                    (n.kind == NodeKind::Prime && n.gen == gen);
        if (keep) out.nodes.push_back(n);
    }
    finalize(out);
    return out;
}

PortraitGraph filtration_level(const PortraitGraph& G, int n) {
    PortraitGraph out;
    out.ring = G.ring;
    out.depth = G.depth;
    for (const PortraitNode& nd : G.nodes)
        if (nd.level <= n) out.nodes.push_back(nd);
    finalize(out);
    return out;
}

Json portrait_to_json(const PortraitGraph& G) {
    Json j;
    j["ring"] = info(G.ring).display;
    j["depth"] = G.depth;
    j["nodes"] = Json::array();
    for (const PortraitNode& n : G.nodes)
        j["nodes"].push_back({{"label", n.label()}, {"level", n.level}});
    j["edges"] = Json::array();
    for (const auto& [a, b] : G.edges) j["edges"].push_back({a, b});
    return j;
}

std::string export_graph(const PortraitGraph& G, const std::string& format) {
    if (format == "json") return portrait_to_json(G).dump(2) + "\n";
    if (format != "dot")
        fail("UnknownFormat", "export format must be dot or json, not '" +
                                  format + "'");
    std::ostringstream os;
    os << "digraph portrait {\n";
    os << "  graph [ring=\"" << info(G.ring).display << "\", depth=" << G.depth
       << "];\n";
    for (std::size_t i = 0; i < G.nodes.size(); ++i)
        os << "  n" << i << " [label=\"" << G.nodes[i].label() << "@"
           << G.nodes[i].level << "\"];\n";
    for (const auto& [a, b] : G.edges) os << "  n" << a << " -> n" << b << ";\n";
    os << "}\n";
    return os.str();
}

} // namespace lt
