#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#ifndef CGEST_BIN
#error "CGEST_BIN must point at the cli binary"
#endif

namespace {

struct TempDir {
    std::string path;
    TempDir() {
        char tmpl[] = "/tmp/cgest_cli_XXXXXX";
        path = mkdtemp(tmpl);
    }
    ~TempDir() {
        if (std::system(("rm -rf " + path).c_str()) != 0) {}  // best effort
    }
    std::string file(const std::string& name) const { return path + "/" + name; }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CGEST_BIN) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    os << content;
}

const char* kIndefinite =
    "%%MatrixMarket matrix coordinate real symmetric\n"
    "2 2 2\n"
    "1 1 1.0\n"
    "2 2 -1.0\n";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("gen writes a symmetric coordinate matrix") {
    TempDir td;
    const std::string mtx = td.file("geo.mtx");
    CHECK(run_cli("gen --kind geometric --n 20 --lambda1 1 --lambdan 100 --output " + mtx) == 0);
    const std::string content = slurp(mtx);
    CHECK(content.rfind("%%MatrixMarket matrix coordinate real symmetric", 0) == 0);
}

TEST_CASE("gen, solve, and compare form a pipeline") {
    TempDir td;
    const std::string mtx = td.file("m.mtx");
    REQUIRE(run_cli("gen --kind geometric --n 30 --lambda1 1 --lambdan 100 "
                    "--form similar --seed 3 --output " + mtx) == 0);

    const std::string csv = td.file("solve.csv");
    CHECK(run_cli("solve --matrix " + mtx + " --rhs random --seed 42 "
                  "--stop-policy relative --stop-threshold 1e-8 --output " + csv) == 0);
    const std::string out = slurp(csv);
    CHECK(out.rfind("k,accepted_d,delta,delta_plus,upper_heuristic,omega,mu_k,phi_k,stopped",
                    0) == 0);
    CHECK(out.find('\n') != std::string::npos);
    CHECK(out.find('\r') == std::string::npos);

    const std::string cmp = td.file("compare.csv");
    CHECK(run_cli("compare --matrix " + mtx + " --rhs random --seed 42 "
                  "--stop-policy relative --stop-threshold 1e-8 --output " + cmp) == 0);
    const std::string cout_ = slurp(cmp);
    CHECK(cout_.find(",eps_true,rel_err_lower,rel_err_upper,rel_err_omega,ideal_d,tau") !=
          std::string::npos);
}

TEST_CASE("same seed reproduces the output byte for byte") {
    TempDir td;
    const std::string mtx = td.file("m.mtx");
    REQUIRE(run_cli("gen --kind clustered --n 40 --lambda1 1 --lambdan 1e4 --clusters 4 "
                    "--form similar --seed 11 --output " + mtx) == 0);
    const std::string f1 = td.file("run1.csv");
    const std::string f2 = td.file("run2.csv");
    const std::string args = "solve --matrix " + mtx +
                             " --rhs random --seed 42 --precond jacobi "
                             "--stop-policy relative --stop-threshold 1e-7 --output ";
    REQUIRE(run_cli(args + f1) == 0);
    REQUIRE(run_cli(args + f2) == 0);
    CHECK(slurp(f1) == slurp(f2));
    // A different seed changes the right-hand side, hence the records.
    const std::string f3 = td.file("run3.csv");
    REQUIRE(run_cli("solve --matrix " + mtx +
                    " --rhs random --seed 43 --precond jacobi "
                    "--stop-policy relative --stop-threshold 1e-7 --output " + f3) == 0);
    CHECK(slurp(f1) != slurp(f3));
}

TEST_CASE("jsonl output and the startup guard flag are accepted") {
    TempDir td;
    const std::string mtx = td.file("m.mtx");
    REQUIRE(run_cli("gen --kind linear --n 25 --lambda1 1 --lambdan 50 --output " + mtx) == 0);
    const std::string out = td.file("run.jsonl");
    CHECK(run_cli("solve --matrix " + mtx + " --initial-phase --tau 0.3 "
                  "--stop-policy absolute --stop-threshold 1e-6 --format jsonl --output " +
                  out) == 0);
    const std::string content = slurp(out);
    CHECK(content.rfind("{\"k\":", 0) == 0);
}

TEST_CASE("iteration budget exhaustion exits with 2") {
    TempDir td;
    const std::string mtx = td.file("m.mtx");
    REQUIRE(run_cli("gen --kind geometric --n 30 --lambda1 1 --lambdan 1e6 --output " + mtx) == 0);
    CHECK(run_cli("solve --matrix " + mtx + " --max-iter 3 --output " + td.file("o.csv")) == 2);
}

TEST_CASE("unreadable input exits with 1") {
    TempDir td;
    CHECK(run_cli("solve --matrix " + td.file("missing.mtx")) == 1);
}

TEST_CASE("breakdown exits with 3") {
    TempDir td;
    const std::string mtx = td.file("indef.mtx");
    spit(mtx, kIndefinite);
    // Plain iteration: p^T A p = 0 on the first step.
    CHECK(run_cli("solve --matrix " + mtx) == 3);
    // Factorization: the pivot at row 2 is negative.
    CHECK(run_cli("solve --matrix " + mtx + " --precond ic0") == 3);
}

TEST_CASE("bad arguments are rejected") {
    TempDir td;
    const std::string mtx = td.file("m.mtx");
    REQUIRE(run_cli("gen --kind linear --n 10 --output " + mtx) == 0);
    CHECK(run_cli("solve --matrix " + mtx + " --tau 1.5") != 0);
    CHECK(run_cli("solve --matrix " + mtx + " --stop-policy absolute") != 0);
    CHECK(run_cli("solve --matrix " + mtx + " --format xml") != 0);
    CHECK(run_cli("frobnicate") != 0);
}

}  // TEST_SUITE
