// End-to-end exercise of the command line tool.  Spawns the binary named in
// argv[1], captures exit code and both streams, and checks output bytes,
// error mapping, and determinism across repeat runs.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "stagedlt/goldens.hpp"
#include "stagedlt/moduli.hpp"
#include "stagedlt/portrait.hpp"
#include "stagedlt/wire.hpp"

namespace {

struct Res {
    int code = -1;
    std::string out, err;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::string g_bin;

Res run_cli(const std::string& args) {
    std::string cmd = g_bin + " " + args + " >/tmp/clidrv_out 2>/tmp/clidrv_err";
    int rc = std::system(cmd.c_str());
    Res r;
    r.code = WEXITSTATUS(rc);
    r.out = slurp("/tmp/clidrv_out");
    r.err = slurp("/tmp/clidrv_err");
    return r;
}

int g_checks = 0, g_fails = 0;

void check(bool ok, const std::string& what) {
    ++g_checks;
    if (!ok) {
        ++g_fails;
        std::cout << "FAIL: " << what << "\n";
    }
}

void check_eq(const std::string& got, const std::string& want, const std::string& what) {
    ++g_checks;
    if (got != want) {
        ++g_fails;
        std::cout << "FAIL: " << what << "\n  want: " << want << "\n  got:  " << got << "\n";
    }
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

lt::TruncationProfile prof(int D, int M, std::vector<int> N, int Nx) {
    lt::TruncationProfile p;
    p.D = D;
    p.M = M;
    p.Nx = Nx;
    p.N = std::move(N);
    return p;
}

void case_pseries() {
    Res r = run_cli("fgl pseries --kind multiplicative --prime 2 --precision 3 --xdeg 6");
    check(r.code == 0, "pseries mult p=2 exit code");
    check_eq(r.out, "[2](x) = 2x + x^2\n", "pseries mult p=2 output");
    check(contains(r.err, "# caps:"), "pseries reports resolved caps");

    r = run_cli("fgl pseries --kind multiplicative --prime 3 --precision 2");
    check(r.code == 0, "pseries mult p=3 exit code");
    check_eq(r.out, "[3](x) = 3x + 3x^2 + x^3\n", "pseries mult p=3 output");

    // defaulted caps make repeat runs byte-identical
    Res r1 = run_cli("fgl pseries --kind hazewinkel --height 2 --prime 2 --precision 2");
    Res r2 = run_cli("fgl pseries --kind hazewinkel --height 2 --prime 2 --precision 2");
    check(r1.code == 0, "pseries hazewinkel exit code");
    check(r1.out == r2.out && r1.err == r2.err, "pseries hazewinkel deterministic");
    check(r1.out.rfind("[2](x) = 2x + ", 0) == 0, "pseries hazewinkel leading term");
}

void case_height() {
    Res r = run_cli("fgl height --kind honda --height 2 --prime 2");
    check(r.code == 0, "height honda exit code");
    check_eq(r.out, "height = 2\n", "height honda output");
    check(contains(r.err, "a=1"), "honda forces precision 1");

    r = run_cli("fgl height --kind honda --h 2 --prime 2 --xdeg 6");
    check(r.code == 0, "height honda --h alias exit code");
    check_eq(r.out, "height = 2\n", "height honda via --h alias and explicit xdeg");

    r = run_cli("fgl height --kind multiplicative --prime 3 --precision 2");
    check(r.code == 0, "height mult exit code");
    check_eq(r.out, "height = 1\n", "height mult output");
}

void case_validate() {
    Res r = run_cli("fgl validate --kind hazewinkel --height 2 --prime 2 --precision 2");
    check(r.code == 0, "validate hazewinkel exit code");
    check_eq(r.out, "validation: pass\n", "validate hazewinkel output");
    check(contains(r.err, "h=2"), "validate reports staged ring shape");
}

void case_usage() {
    Res r = run_cli("fgl --bogus");
    check(r.code == 2, "unknown flag exit code");
    check(contains(r.err, "UsageError"), "unknown flag names UsageError");

    r = run_cli("fgl pseries --prime 2");
    check(r.code == 2, "missing --kind exit code");

    r = run_cli("fgl height --kind honda --prime 2");
    check(r.code == 2, "honda without --height exit code");
    check(contains(r.err, "--height"), "honda without --height message");

    r = run_cli("classify --example tautological --in /tmp/nope.json");
    check(r.code == 2, "classify with both sources exit code");
}

void case_portrait() {
    Res r = run_cli("portrait --example kx --depth 4");
    check(r.code == 0, "portrait kx exit code");
    check_eq(r.out, golden::fig1_dot(), "portrait kx matches the frozen graph");

    r = run_cli("portrait --example kxx --depth 4 --format dot");
    std::string want = lt::export_graph(lt::portrait_example("kxx", 4), "dot");
    check(r.code == 0, "portrait kxx exit code");
    check_eq(r.out, want, "portrait kxx matches in-process export");

    r = run_cli("portrait --example xkx --depth 3 --format json");
    want = lt::export_graph(lt::portrait_example("xkx", 3), "json");
    check(r.code == 0, "portrait json exit code");
    check_eq(r.out, want, "portrait json matches in-process export");
    check(!lt::Json::parse(r.out, nullptr, false).is_discarded(), "portrait json parses");

    r = run_cli("portrait --example nope --depth 3");
    check(r.code == 1, "unknown portrait example exit code");
    check(contains(r.err, "UnknownExample"), "unknown portrait example error name");

    r = run_cli("portrait --example kx --depth 4 --format pdf");
    check(r.code == 1, "unknown format exit code");
    check(contains(r.err, "UnknownFormat"), "unknown format error name");

    r = run_cli("portrait --example kx --depth 4 --out /tmp/clidrv_graph.dot");
    check(r.code == 0 && r.out.empty(), "portrait --out writes no stdout");
    check_eq(slurp("/tmp/clidrv_graph.dot"), golden::fig1_dot(), "portrait --out file bytes");
}

void case_classify() {
    Res r1 = run_cli("classify --example tautological");
    check(r1.code == 0, "classify tautological exit code");
    lt::Json j = lt::Json::parse(r1.out, nullptr, false);
    check(!j.is_discarded(), "classify tautological emits JSON");
    if (!j.is_discarded()) {
        check(j.contains("f") && j.contains("phi") && j.contains("steps"),
              "classify JSON carries map, gauge, and step log");
        check(j["steps"].is_array() && j["steps"].empty(),
              "tautological bundle needs no solver steps");
    }
    Res r2 = run_cli("classify --example tautological");
    check(r1.out == r2.out, "classify tautological deterministic");

    r1 = run_cli("classify --example twisted");
    check(r1.code == 0, "classify twisted exit code");
    j = lt::Json::parse(r1.out, nullptr, false);
    check(!j.is_discarded() && j["steps"].is_array() && !j["steps"].empty(),
          "twisted bundle exercises the solver");

    r1 = run_cli("classify --example height-mismatch");
    check(r1.code == 1, "classify height-mismatch exit code");
    check(contains(r1.err, "HeightMismatch@stage1"),
          "height mismatch names the offending stage");

    // the --in path accepts a bundle this driver serializes itself
    lt::StagedRing R(lt::GaloisRing(2, 3, 1), 2, {1}, prof(8, 5, {3}, 6));
    lt::StagedDeformation D = lt::tautological_deformation(R);
    {
        std::ofstream f("/tmp/clidrv_bundle.json", std::ios::binary);
        f << lt::deformation_to_json(D).dump(2) << "\n";
    }
    r1 = run_cli("classify --in /tmp/clidrv_bundle.json");
    check(r1.code == 0, "classify --in exit code");
    j = lt::Json::parse(r1.out, nullptr, false);
    check(!j.is_discarded() && j["steps"].is_array() && j["steps"].empty(),
          "classify --in reproduces the tautological answer");

    r1 = run_cli("classify --in /tmp/clidrv_missing.json");
    check(r1.code == 1 && contains(r1.err, "BadInput"), "classify missing file error");
}

void case_ring() {
    Res r1 = run_cli("ring --prime 2 --precision 3 --heights 1");
    check(r1.code == 0, "ring exit code");
    lt::Json j = lt::Json::parse(r1.out, nullptr, false);
    check(!j.is_discarded(), "ring emits JSON");
    if (!j.is_discarded()) {
        lt::StagedRing R = lt::staged_ring_from_json(j);
        check(R.spec().coeff.p() == 2 && R.spec().h == 2, "ring spec round trips");
    }
    Res r2 = run_cli("ring --prime 2 --precision 3 --heights 1");
    check(r1.out == r2.out && r1.err == r2.err, "ring deterministic");
    check(contains(r1.err, "# caps:"), "ring reports resolved caps");

    r1 = run_cli("ring --prime 2 --precision 2 --heights 2,1 --xdeg 4");
    check(r1.code == 0, "ring two-stage exit code");
    j = lt::Json::parse(r1.out, nullptr, false);
    check(!j.is_discarded() && lt::staged_ring_from_json(j).spec().h == 3,
          "ring two-stage heights parse");
}

void case_selftest() {
    Res r = run_cli("selftest");
    check(r.code == 0, "selftest exit code");
    check(contains(r.out, "13/13 criteria passed"), "selftest reports full pass");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cout << "usage: cli_driver <path-to-cli-binary>\n";
        return 1;
    }
    g_bin = argv[1];
    case_pseries();
    case_height();
    case_validate();
    case_usage();
    case_portrait();
    case_classify();
    case_ring();
    case_selftest();
    std::cout << g_checks - g_fails << "/" << g_checks << " cli checks passed\n";
    return g_fails == 0 ? 0 : 1;
}
