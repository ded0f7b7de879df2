#pragma once

// Hand-encoded ideal graphs for the depth-4 sample portraits, written out
// literally so the generator is checked against an independent transcription.

#include <string>
#include <utility>
#include <vector>

namespace golden {

using NodeList = std::vector<std::pair<std::string, int>>;
using EdgeList = std::vector<std::pair<std::string, std::string>>;

// one-variable power series ring: the nilpotent chain and the generic point
inline NodeList fig1_nodes() {
    return {{"(x)", -1}, {"(x^2)", -1}, {"(x^3)", -1}, {"(x^4)", -1}, {"(0)", 0}};
}

inline EdgeList fig1_edges() {
    return {
        {"(x^2)", "(x)"},
        {"(x^3)", "(x)"}, {"(x^3)", "(x^2)"},
        {"(x^4)", "(x)"}, {"(x^4)", "(x^2)"}, {"(x^4)", "(x^3)"},
        {"(0)", "(x)"}, {"(0)", "(x^2)"}, {"(0)", "(x^3)"}, {"(0)", "(x^4)"},
    };
}

// Laurent series ring: a single generic point, one level up
inline NodeList fig2_nodes() { return {{"(0)", 1}}; }
inline EdgeList fig2_edges() { return {}; }

// two-variable power series ring: closed point with its powers, three prime
// chains (the two axes and one generic prime family), generic point
inline NodeList fig3_nodes() {
    return {
        {"(x,y)", -1}, {"(x,y)^2", -1}, {"(x,y)^3", -1}, {"(x,y)^4", -1},
        {"(x)", 0},  {"(x^2)", 0}, {"(x^3)", 0}, {"(x^4)", 0},
        {"(y)", 0},  {"(y^2)", 0}, {"(y^3)", 0}, {"(y^4)", 0},
        {"I", 0},    {"I^2", 0},   {"I^3", 0},   {"I^4", 0},
        {"(0)", 1},
    };
}

inline EdgeList fig3_edges() {
    return {
        // within the maximal-ideal chain
        {"(x,y)^2", "(x,y)"},
        {"(x,y)^3", "(x,y)"}, {"(x,y)^3", "(x,y)^2"},
        {"(x,y)^4", "(x,y)"}, {"(x,y)^4", "(x,y)^2"}, {"(x,y)^4", "(x,y)^3"},
        // within the x-chain
        {"(x^2)", "(x)"},
        {"(x^3)", "(x)"}, {"(x^3)", "(x^2)"},
        {"(x^4)", "(x)"}, {"(x^4)", "(x^2)"}, {"(x^4)", "(x^3)"},
        // within the y-chain
        {"(y^2)", "(y)"},
        {"(y^3)", "(y)"}, {"(y^3)", "(y^2)"},
        {"(y^4)", "(y)"}, {"(y^4)", "(y^2)"}, {"(y^4)", "(y^3)"},
        // within the family chain
        {"I^2", "I"},
        {"I^3", "I"}, {"I^3", "I^2"},
        {"I^4", "I"}, {"I^4", "I^2"}, {"I^4", "I^3"},
        // x^k lies in (x,y)^j exactly when j <= k
        {"(x)", "(x,y)"},
        {"(x^2)", "(x,y)"}, {"(x^2)", "(x,y)^2"},
        {"(x^3)", "(x,y)"}, {"(x^3)", "(x,y)^2"}, {"(x^3)", "(x,y)^3"},
        {"(x^4)", "(x,y)"}, {"(x^4)", "(x,y)^2"}, {"(x^4)", "(x,y)^3"},
        {"(x^4)", "(x,y)^4"},
        // y^k likewise
        {"(y)", "(x,y)"},
        {"(y^2)", "(x,y)"}, {"(y^2)", "(x,y)^2"},
        {"(y^3)", "(x,y)"}, {"(y^3)", "(x,y)^2"}, {"(y^3)", "(x,y)^3"},
        {"(y^4)", "(x,y)"}, {"(y^4)", "(x,y)^2"}, {"(y^4)", "(x,y)^3"},
        {"(y^4)", "(x,y)^4"},
        // the family chain likewise
        {"I", "(x,y)"},
        {"I^2", "(x,y)"}, {"I^2", "(x,y)^2"},
        {"I^3", "(x,y)"}, {"I^3", "(x,y)^2"}, {"I^3", "(x,y)^3"},
        {"I^4", "(x,y)"}, {"I^4", "(x,y)^2"}, {"I^4", "(x,y)^3"},
        {"I^4", "(x,y)^4"},
        // the zero ideal lies in everything
        {"(0)", "(x,y)"}, {"(0)", "(x,y)^2"}, {"(0)", "(x,y)^3"},
        {"(0)", "(x,y)^4"},
        {"(0)", "(x)"}, {"(0)", "(x^2)"}, {"(0)", "(x^3)"}, {"(0)", "(x^4)"},
        {"(0)", "(y)"}, {"(0)", "(y^2)"}, {"(0)", "(y^3)"}, {"(0)", "(y^4)"},
        {"(0)", "I"}, {"(0)", "I^2"}, {"(0)", "I^3"}, {"(0)", "I^4"},
    };
}

// x-adic completion of the y-localization: the x-chain one level up with the
// generic point two levels up
inline NodeList fig5_nodes() {
    return {{"(x)", 1}, {"(x^2)", 1}, {"(x^3)", 1}, {"(x^4)", 1}, {"(0)", 2}};
}

inline EdgeList fig5_edges() {
    return {
        {"(x^2)", "(x)"},
        {"(x^3)", "(x)"}, {"(x^3)", "(x^2)"},
        {"(x^4)", "(x)"}, {"(x^4)", "(x^2)"}, {"(x^4)", "(x^3)"},
        {"(0)", "(x)"}, {"(0)", "(x^2)"}, {"(0)", "(x^3)"}, {"(0)", "(x^4)"},
    };
}

// closure of (y^3) in the depth-4 two-variable graph
inline std::vector<std::string> closure_y3() {
    return {"(x,y)", "(x,y)^2", "(x,y)^3", "(y)", "(y^2)", "(y^3)"};
}

// closure of (x^3 (x+y)^2 y); the maximal chain saturates the depth window
inline std::vector<std::string> closure_x3s2y() {
    return {"(x,y)", "(x,y)^2", "(x,y)^3", "(x,y)^4",
            "(x)",   "(x^2)",   "(x^3)",   "(y)",     "I", "I^2"};
}

// frozen DOT rendering of the depth-4 one-variable graph
inline std::string fig1_dot() {
    return "digraph portrait {\n"
           "  graph [ring=\"k[[x]]\", depth=4];\n"
           "  n0 [label=\"(x)@-1\"];\n"
           "  n1 [label=\"(x^2)@-1\"];\n"
           "  n2 [label=\"(x^3)@-1\"];\n"
           "  n3 [label=\"(x^4)@-1\"];\n"
           "  n4 [label=\"(0)@0\"];\n"
           "  n1 -> n0;\n"
           "  n2 -> n0;\n"
           "  n2 -> n1;\n"
           "  n3 -> n0;\n"
           "  n3 -> n1;\n"
           "  n3 -> n2;\n"
           "  n4 -> n0;\n"
           "  n4 -> n1;\n"
           "  n4 -> n2;\n"
           "  n4 -> n3;\n"
           "}\n";
}

} // namespace golden
