// Command-line front door: build ring windows, evaluate formal group laws,
// run the classifying solver, emit ideal portraits, and run the acceptance
// checklist.  Output is byte-identical across runs for identical inputs;
// domain failures exit 1 with the error name on stderr, usage errors exit 2.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "stagedlt/fgl.hpp"
#include "stagedlt/moduli.hpp"
#include "stagedlt/portrait.hpp"
#include "stagedlt/selftest.hpp"
#include "stagedlt/series.hpp"
#include "stagedlt/staged.hpp"
#include "stagedlt/wire.hpp"

namespace {

using lt::Fgl;
using lt::GaloisRing;
using lt::StagedDeformation;
using lt::StagedElement;
using lt::StagedMap;
using lt::StagedRing;
using lt::TruncationProfile;
using lt::TruncSeries1;

struct Command {
    std::string verb;  // "ring", "fgl.pseries", "fgl.height", "fgl.validate",
                       // "classify", "portrait", "selftest"
    // ring / law parameters
    int prime = 0;
    int precision = 0;       // unset sentinel: resolved per kind
    int residue_degree = 1;
    int height = 0;          // law height for honda/hazewinkel, search bound otherwise
    std::vector<int> heights;
    // profile caps; negative means "pick the smallest well-posed value"
    int xdeg = -1;
    int ucap = -1;
    int denom_cap = -1;
    std::vector<int> depths;
    bool depths_given = false;
    std::string kind;
    // portrait / classify
    std::string example;
    int depth = 0;
    std::string format = "dot";
    std::string in_path, out_path;
};

int int_pow(int b, int e) {
    int r = 1;
    while (e-- > 0) r *= b;
    return r;
}

TruncationProfile make_prof(int D, int M, std::vector<int> N, int Nx) {
    TruncationProfile p;
    p.D = D;
    p.M = M;
    p.Nx = Nx;
    p.N = std::move(N);
    return p;
}

std::vector<int> slack_caps(int a, int D, const std::vector<int>& heights) {
    std::vector<int> N;
    for (int hj : heights) N.push_back(hj >= 1 ? a + (hj - 1) * D : 1);
    return N;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) lt::fail("BadInput", "cannot open output file " + out_path);
    f << text;
}

std::string list_str(const std::vector<int>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + "]";
}

// every cap that was defaulted is echoed here, so a run is reproducible from
// its own diagnostics
void report_caps(const StagedRing& R) {
    const auto& s = R.spec();
    std::cerr << "# ring: p=" << s.coeff.p() << " a=" << s.coeff.a()
              << " n=" << s.coeff.n() << " h=" << s.h
              << " heights=" << list_str(s.heights) << "\n";
    std::cerr << "# caps: xdeg=" << s.prof.Nx << " ucap=" << s.prof.D
              << " denom-cap=" << s.prof.M << " depths=" << list_str(s.prof.N)
              << "\n";
}

// ---------------------------------------------------------------------------
// ring resolution
// ---------------------------------------------------------------------------

StagedRing build_ring(const Command& c) {
    if (c.precision < 1) lt::fail("UsageError", "--precision is required here");
    int h = static_cast<int>(c.heights.size()) + 1;
    int D = c.ucap >= 0 ? c.ucap : 1;
    std::vector<int> N = c.depths_given ? c.depths : slack_caps(c.precision, D, c.heights);
    int M = c.denom_cap >= 0 ? c.denom_cap : (c.heights.empty() ? 1 : [&] {
        int m = 1;
        for (int nj : N) m = std::max(m, nj + 2);
        return m;
    }());
    int Nx = c.xdeg >= 0 ? c.xdeg : 2;
    return StagedRing(GaloisRing(c.prime, c.precision, c.residue_degree), h,
                      c.heights, make_prof(D, M, std::move(N), Nx));
}

// ---------------------------------------------------------------------------
// fgl resolution
// ---------------------------------------------------------------------------

struct LawBundle {
    StagedRing ring;
    Fgl law;
};

// smallest window exponent cap accepted by the deformation engine
int minimal_ucap(int p, int a, int n, int h, int Nx) {
    for (int D = 1; D <= 4 * Nx + 4; ++D) {
        try {
            StagedRing R(GaloisRing(p, a, n), h, {}, make_prof(D, 0, {}, Nx));
            (void)lt::hazewinkel_deformation(R);
            return D;
        } catch (const lt::DomainError& e) {
            if (e.code() != "BadInput") throw;
        }
    }
    lt::fail("PrecisionExhausted", "no window exponent cap up to " +
                                       std::to_string(4 * Nx + 4) + " fits the deformation");
}

LawBundle build_law(const Command& c) {
    const std::string& k = c.kind;
    if (k == "honda" || k == "hazewinkel") {
        if (c.height < 1)
            lt::fail("UsageError", "--height is required for kind " + k);
    }
    int a = c.precision;
    if (a < 1) {
        if (k == "honda")
            a = 1;  // the only precision the law admits
        else
            lt::fail("UsageError", "--precision is required for kind " + k);
    }
    int Nx = c.xdeg >= 0 ? c.xdeg
                         : (k == "honda" || k == "hazewinkel")
                               ? int_pow(c.prime, c.height) + 2
                               : c.prime + 2;
    int M = c.denom_cap >= 0 ? c.denom_cap : 0;
    int h = k == "hazewinkel" ? c.height : 1;
    int D;
    if (c.ucap >= 0)
        D = c.ucap;
    else if (k == "hazewinkel")
        D = minimal_ucap(c.prime, a, c.residue_degree, h, Nx);
    else
        D = 1;
    StagedRing R(GaloisRing(c.prime, a, c.residue_degree), h, {},
                 make_prof(D, M, {}, Nx));
    Fgl F = k == "additive"         ? lt::fgl_additive(R, 0)
            : k == "multiplicative" ? lt::fgl_multiplicative(R, 0)
            : k == "honda"          ? lt::fgl_honda(R, c.height)
                                    : lt::hazewinkel_deformation(R);
    return {R, F};
}

// ---------------------------------------------------------------------------
// classify fixtures
// ---------------------------------------------------------------------------

StagedRing classify_ring(int p, int a) {
    int D = 8, Nx = p * p + 2;
    std::vector<int> N = slack_caps(a, D, {1});
    int M = 1;
    for (int nj : N) M = std::max(M, nj + 2);
    return StagedRing(GaloisRing(p, a, 1), 2, {1}, make_prof(D, M, std::move(N), Nx));
}

StagedDeformation classify_fixture(const std::string& name) {
    if (name == "tautological") {
        return lt::tautological_deformation(classify_ring(2, 3));
    }
    if (name == "twisted") {
        StagedRing R = classify_ring(2, 3);
        StagedMap tw = lt::identity_map(R, 0);
        tw.images = {R.gen(1, 0) + R.p_elem(0)};
        TruncSeries1 phi = TruncSeries1::identity(R, 0);
        phi.set_coeff(3, R.p_elem(0));
        phi.set_coeff(5, R.gen(1, 0) * R.from_int(3, 0));
        return lt::induced_deformation(R, tw, phi);
    }
    if (name == "height-mismatch") {
        StagedRing R = classify_ring(2, 1);
        StagedDeformation D = lt::tautological_deformation(R);
        D.laws[1] = lt::fgl_honda(R, 2).at_stage(1);
        return D;
    }
    lt::fail("UnknownExample", "no classify fixture named " + name);
}

// ---------------------------------------------------------------------------
// parse and run
// ---------------------------------------------------------------------------

void add_law_options(CLI::App* sub, Command& c) {
    // free up "--h" as a height alias; help stays reachable as --help
    sub->set_help_flag("--help", "print this help message and exit");
    sub->add_option("--kind", c.kind, "law kind")
        ->required()
        ->check(CLI::IsMember({"additive", "multiplicative", "honda", "hazewinkel"}));
    sub->add_option("--prime", c.prime, "coefficient prime p")->required();
    sub->add_option("--precision", c.precision, "p-adic precision a (honda forces 1)");
    sub->add_option("--residue-degree", c.residue_degree,
                    "residue field degree n (default 1)");
    sub->add_option("--height,--h", c.height,
                    "law height for honda/hazewinkel; height search bound otherwise");
    sub->add_option("--xdeg", c.xdeg, "series truncation degree (default: smallest well-posed)");
    sub->add_option("--ucap", c.ucap, "window exponent cap (default: smallest well-posed)");
    sub->add_option("--denom-cap", c.denom_cap, "denominator exponent cap (default: 0)");
}

Command parse_args(CLI::App& app, int argc, char** argv) {
    Command c;
    app.require_subcommand(1);

    CLI::App* ring = app.add_subcommand("ring", "build a staged ring window and print its spec");
    ring->add_option("--prime", c.prime, "coefficient prime p")->required();
    ring->add_option("--precision", c.precision, "p-adic precision a")->required();
    ring->add_option("--residue-degree", c.residue_degree, "residue field degree n (default 1)");
    ring->add_option("--heights", c.heights, "localization schedule, comma separated")
        ->delimiter(',');
    ring->add_option("--xdeg", c.xdeg, "series truncation degree (default 2)");
    ring->add_option("--ucap", c.ucap, "window exponent cap (default 1)");
    ring->add_option("--denom-cap", c.denom_cap, "denominator exponent cap");
    ring->add_option("--depths", c.depths, "completion culls per stage, comma separated")
        ->delimiter(',');
    ring->add_option("--out", c.out_path, "write the spec to this file");

    CLI::App* fgl = app.add_subcommand("fgl", "formal group law computations");
    fgl->require_subcommand(1);
    CLI::App* ps = fgl->add_subcommand("pseries", "print the multiplication-by-p series");
    CLI::App* ht = fgl->add_subcommand("height", "detect the law's height index");
    CLI::App* vl = fgl->add_subcommand("validate", "check the law axioms");
    for (CLI::App* sub : {ps, ht, vl}) add_law_options(sub, c);

    CLI::App* cl = app.add_subcommand("classify", "run the classifying solver on a bundle");
    cl->add_option("--example", c.example,
                   "built-in fixture: tautological, twisted, height-mismatch");
    cl->add_option("--in", c.in_path, "deformation bundle JSON file");
    cl->add_option("--out", c.out_path, "write classifying data to this file");

    CLI::App* po = app.add_subcommand("portrait", "emit an ideal portrait graph");
    po->add_option("--example", c.example, "ring name: kx, xkx, kxx, ykxx, ykxxc")
        ->required();
    po->add_option("--depth", c.depth, "power depth of the chains")->required();
    po->add_option("--format", c.format, "dot or json (default dot)");
    po->add_option("--out", c.out_path, "write the graph to this file");

    app.add_subcommand("selftest", "run the acceptance checklist");

    app.parse(argc, argv);

    if (ring->parsed()) c.verb = "ring";
    else if (fgl->parsed())
        c.verb = ps->parsed() ? "fgl.pseries" : ht->parsed() ? "fgl.height" : "fgl.validate";
    else if (cl->parsed()) c.verb = "classify";
    else if (po->parsed()) c.verb = "portrait";
    else c.verb = "selftest";
    c.depths_given = !c.depths.empty();
    return c;
}

int run(const Command& c) {
    if (c.verb == "ring") {
        StagedRing R = build_ring(c);
        report_caps(R);
        emit(lt::staged_spec_to_json(R.spec()).dump(2) + "\n", c.out_path);
        return 0;
    }
    if (c.verb == "fgl.pseries") {
        LawBundle b = build_law(c);
        report_caps(b.ring);
        std::cout << "[" << c.prime << "](x) = "
                  << lt::p_series(b.law, c.prime).str() << "\n";
        return 0;
    }
    if (c.verb == "fgl.height") {
        LawBundle b = build_law(c);
        report_caps(b.ring);
        int t_max = c.height >= 1 ? c.height : 1;
        std::cout << "height = " << lt::fgl_height(b.law, t_max).str() << "\n";
        return 0;
    }
    if (c.verb == "fgl.validate") {
        LawBundle b = build_law(c);
        report_caps(b.ring);
        lt::FglReport rep = lt::fgl_validate(b.law);
        if (rep.pass)
            std::cout << "validation: pass\n";
        else
            std::cout << "validation: FAIL " << rep.detail << "\n";
        return 0;
    }
    if (c.verb == "classify") {
        if (c.example.empty() == c.in_path.empty())
            lt::fail("UsageError", "classify needs exactly one of --example or --in");
        StagedDeformation D = c.example.empty()
                                  ? [&] {
                                        std::ifstream f(c.in_path);
                                        if (!f)
                                            lt::fail("BadInput",
                                                     "cannot open input file " + c.in_path);
                                        lt::Json j = lt::Json::parse(f, nullptr, false);
                                        if (j.is_discarded())
                                            lt::fail("BadInput", "input is not valid JSON");
                                        return lt::deformation_from_json(j);
                                    }()
                                  : classify_fixture(c.example);
        lt::ClassifyingMap C = lt::classify(D);
        emit(lt::classifying_to_json(C).dump(2) + "\n", c.out_path);
        return 0;
    }
    if (c.verb == "portrait") {
        lt::PortraitGraph G = lt::portrait_example(c.example, c.depth);
        emit(lt::export_graph(G, c.format), c.out_path);
        return 0;
    }
    // selftest
    auto results = lt::run_selftest();
    return lt::print_selftest(std::cout, results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"staged ring and formal group law workbench"};
    Command c;
    try {
        c = parse_args(app, argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help and friends
    } catch (const CLI::ParseError& e) {
        std::cerr << "UsageError: " << e.what() << "\n";
        return 2;
    }
    try {
        return run(c);
    } catch (const lt::DomainError& e) {
        if (e.code() == "UsageError") {
            std::cerr << "UsageError: " << e.what() << "\n";
            return 2;
        }
        // surface "stage k" context as name@stagek, the stable grep target
        std::string what = e.what();
        std::string detail = what.substr(what.find(": ") + 2);
        std::string line = e.code();
        if (detail.rfind("stage ", 0) == 0) {
            std::size_t end = detail.find(':', 6);
            if (end != std::string::npos) {
                line += "@stage" + detail.substr(6, end - 6);
                detail = detail.substr(end + 2 <= detail.size() ? end + 2 : end);
            }
        }
        std::cerr << line << (detail.empty() ? "" : ": " + detail) << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "InternalError: " << e.what() << "\n";
        return 1;
    }
}
