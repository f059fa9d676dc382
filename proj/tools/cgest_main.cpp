#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cgest/matrix_market.hpp"
#include "cgest/run_driver.hpp"
#include "cgest/spectrum.hpp"

namespace {

struct CommonArgs {
    std::string matrix_path;
    std::string rhs = "equal";
    std::uint64_t seed = 1;
    std::string precond = "none";
    double shift = 0.0;
    double tau = 0.25;
    double window_tol = 1e-4;
    cgest::index_t d_min = 0;
    bool initial_phase = false;
    std::optional<double> mu;
    std::string stop_policy = "none";
    double stop_threshold = 0.0;
    cgest::index_t max_iter = 10000;
    double residual_floor = 0.0;
    std::string format = "csv";
    std::string output;
};

void add_common_flags(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--matrix", a.matrix_path, "Matrix Market file (coordinate real symmetric)")
        ->required();
    cmd->add_option("--rhs", a.rhs, "right-hand side: equal | random | <path>");
    cmd->add_option("--seed", a.seed, "seed for --rhs random");
    cmd->add_option("--precond", a.precond, "none | jacobi | ic0");
    cmd->add_option("--shift", a.shift, "diagonal shift applied before ic0 factorization");
    cmd->add_option("--tau", a.tau, "target relative accuracy of the error estimate")
        ->check(CLI::Range(1e-12, 0.999999999));
    cmd->add_option("--window-tol", a.window_tol, "history-window cutoff for the safety factor");
    cmd->add_option("--d-min", a.d_min, "minimum delay at estimate release");
    cmd->add_flag("--initial-phase", a.initial_phase, "enable the startup delay guard");
    cmd->add_option("--mu", a.mu, "eigenvalue underestimate enabling the guaranteed upper bound");
    cmd->add_option("--stop-policy", a.stop_policy, "none | absolute | relative");
    cmd->add_option("--stop-threshold", a.stop_threshold, "threshold for the stop policy");
    cmd->add_option("--max-iter", a.max_iter, "iteration budget");
    cmd->add_option("--residual-floor", a.residual_floor,
                    "halt when ||r|| <= floor * ||b|| (0: only exact zero halts)");
    cmd->add_option("--format", a.format, "csv | jsonl");
    cmd->add_option("--output", a.output, "write records here instead of stdout");
}

cgest::RunConfig to_run_config(const CommonArgs& a) {
    cgest::RunConfig cfg;
    cfg.tau = a.tau;
    cfg.window_tol = a.window_tol;
    cfg.d_min = a.d_min;
    cfg.initial_phase = a.initial_phase;
    cfg.mu = a.mu;
    if (a.stop_policy == "absolute") {
        cfg.stop.policy = cgest::StopPolicy::absolute;
    } else if (a.stop_policy == "relative") {
        cfg.stop.policy = cgest::StopPolicy::relative;
    } else if (a.stop_policy != "none") {
        throw CLI::ValidationError("--stop-policy", "expected none, absolute or relative");
    }
    if (cfg.stop.policy != cgest::StopPolicy::none) {
        if (!(a.stop_threshold > 0.0)) {
            throw CLI::ValidationError("--stop-threshold", "must be positive with a stop policy");
        }
        cfg.stop.threshold = a.stop_threshold;
    }
    cfg.max_iter = a.max_iter;
    cfg.residual_floor_rel = a.residual_floor;
    return cfg;
}

cgest::RhsSpec to_rhs_spec(const std::string& rhs) {
    cgest::RhsSpec spec;
    if (rhs == "equal") {
        spec.kind = cgest::RhsKind::equal;
    } else if (rhs == "random") {
        spec.kind = cgest::RhsKind::uniform_random;
    } else {
        spec.kind = cgest::RhsKind::file;
        spec.path = rhs;
    }
    return spec;
}

cgest::Preconditioner make_precond(const CommonArgs& a, const cgest::CsrMatrix& A) {
    switch (cgest::parse_precond_kind(a.precond)) {
        case cgest::PrecondKind::jacobi:
            return cgest::Preconditioner::jacobi(A);
        case cgest::PrecondKind::ic0:
            return cgest::Preconditioner::ic0(A, a.shift);
        case cgest::PrecondKind::identity:
        default:
            return cgest::Preconditioner::identity(A.n);
    }
}

void emit_records(const CommonArgs& a, const std::vector<cgest::IterationRecord>& records,
                  bool with_truth) {
    const auto write = [&](std::ostream& os) {
        if (a.format == "jsonl") {
            cgest::write_jsonl(os, records, with_truth);
        } else if (a.format == "csv") {
            cgest::write_csv(os, records, with_truth);
        } else {
            throw CLI::ValidationError("--format", "expected csv or jsonl");
        }
    };
    if (a.output.empty()) {
        write(std::cout);
    } else {
        std::ofstream os(a.output, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open output file: " + a.output);
        write(os);
    }
}

void print_summary(const cgest::InstrumentedRun& run) {
    const char* reason = "max_iter";
    switch (run.reason) {
        case cgest::StopReason::consumer: reason = "estimate"; break;
        case cgest::StopReason::residual_floor: reason = "residual_floor"; break;
        case cgest::StopReason::already_converged: reason = "already_converged"; break;
        case cgest::StopReason::max_iter: reason = "max_iter"; break;
    }
    std::fprintf(stderr, "iterations: %lld\n", static_cast<long long>(run.iterations));
    std::fprintf(stderr, "stop: %s\n", reason);
    if (!run.records.empty()) {
        const cgest::IterationRecord& last = run.records.back();
        std::fprintf(stderr, "estimate_at_k: %lld\n", static_cast<long long>(last.k));
        std::fprintf(stderr, "error_lower: %.17g\n", std::sqrt(last.delta_plus));
        std::fprintf(stderr, "error_upper: %.17g\n", std::sqrt(last.upper_heuristic));
    }
}

int exit_code_for(const cgest::InstrumentedRun& run) {
    switch (run.reason) {
        case cgest::StopReason::consumer:
        case cgest::StopReason::residual_floor:
        case cgest::StopReason::already_converged:
            return 0;
        case cgest::StopReason::max_iter:
            return 2;
    }
    return 2;
}

int cmd_solve(const CommonArgs& a) {
    const cgest::MatrixMarketResult mm = cgest::read_matrix_market_file(a.matrix_path);
    const cgest::CsrMatrix& A = mm.matrix;
    const cgest::DenseVector b = cgest::read_rhs(to_rhs_spec(a.rhs), A.n, a.seed);
    const cgest::DenseVector x0(static_cast<std::size_t>(A.n), 0.0);
    const cgest::Preconditioner P = make_precond(a, A);
    const cgest::InstrumentedRun run =
        cgest::run_instrumented(A, b, x0, P, to_run_config(a));
    emit_records(a, run.records, false);
    print_summary(run);
    return exit_code_for(run);
}

int cmd_compare(const CommonArgs& a) {
    const cgest::MatrixMarketResult mm = cgest::read_matrix_market_file(a.matrix_path);
    const cgest::CsrMatrix& A = mm.matrix;
    const cgest::DenseVector b = cgest::read_rhs(to_rhs_spec(a.rhs), A.n, a.seed);
    const cgest::DenseVector x0(static_cast<std::size_t>(A.n), 0.0);
    const cgest::Preconditioner P = make_precond(a, A);
    const cgest::CompareResult cr = cgest::run_compare(A, b, x0, P, to_run_config(a));
    emit_records(a, cr.run.records, true);
    print_summary(cr.run);
    std::fprintf(stderr, "lambda_min: %.17g\n", cr.extremes.lambda_min);
    std::fprintf(stderr, "lambda_max: %.17g\n", cr.extremes.lambda_max);
    std::fprintf(stderr, "mu_used: %.17g\n", cr.mu_used);
    std::fprintf(stderr, "frac_meeting_tau: %.17g\n", cr.quality.frac_meeting_tau);
    return exit_code_for(cr.run);
}

struct GenArgs {
    std::string kind = "geometric";
    cgest::index_t n = 100;
    double lambda1 = 1.0;
    double lambdan = 1e4;
    cgest::index_t clusters = 5;
    cgest::index_t plateaus = 5;
    double rho = 0.8;
    std::string form = "diagonal";
    std::uint64_t seed = 1;
    std::string output;
};

int cmd_gen(const GenArgs& g) {
    std::vector<double> ev;
    if (g.kind == "geometric") {
        ev = cgest::geometric_spectrum(g.lambda1, g.lambdan, g.n);
    } else if (g.kind == "linear") {
        ev = cgest::linear_spectrum(g.lambda1, g.lambdan, g.n);
    } else if (g.kind == "clustered") {
        ev = cgest::clustered_spectrum(g.lambda1, g.lambdan, g.n, g.clusters, g.seed);
    } else if (g.kind == "staircase") {
        ev = cgest::staircase_spectrum(g.lambda1, g.lambdan, g.n, g.plateaus);
    } else if (g.kind == "damped") {
        ev = cgest::damped_linear_spectrum(g.lambda1, g.lambdan, g.n, g.rho);
    } else {
        throw CLI::ValidationError("--kind",
                                   "expected geometric, linear, clustered, staircase or damped");
    }
    cgest::CsrMatrix A;
    if (g.form == "diagonal") {
        A = cgest::diagonal_matrix(ev);
    } else if (g.form == "similar") {
        A = cgest::similarity_matrix(ev, g.seed);
    } else {
        throw CLI::ValidationError("--form", "expected diagonal or similar");
    }
    if (g.output.empty()) {
        cgest::write_matrix_market(std::cout, A);
    } else {
        std::ofstream os(g.output, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open output file: " + g.output);
        cgest::write_matrix_market(os, A);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse SPD solver with adaptive energy-norm error estimation"};
    app.require_subcommand(1);

    CommonArgs solve_args;
    CLI::App* solve = app.add_subcommand("solve", "run the solver with the adaptive estimator");
    add_common_flags(solve, solve_args);

    CommonArgs compare_args;
    CLI::App* compare =
        app.add_subcommand("compare", "run solver and dense truth side by side");
    add_common_flags(compare, compare_args);

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "generate a prescribed-spectrum SPD matrix");
    gen->add_option("--kind", gen_args.kind,
                    "geometric | linear | clustered | staircase | damped");
    gen->add_option("--n", gen_args.n, "matrix order")->required();
    gen->add_option("--lambda1", gen_args.lambda1, "smallest eigenvalue");
    gen->add_option("--lambdan", gen_args.lambdan, "largest eigenvalue");
    gen->add_option("--clusters", gen_args.clusters, "cluster count (clustered)");
    gen->add_option("--plateaus", gen_args.plateaus, "plateau count (staircase)");
    gen->add_option("--rho", gen_args.rho, "damping factor (damped)");
    gen->add_option("--form", gen_args.form, "diagonal | similar");
    gen->add_option("--seed", gen_args.seed, "seed for clustered jitter / similarity basis");
    gen->add_option("--output", gen_args.output, "write the matrix here instead of stdout");

    try {
        app.parse(argc, argv);
        if (solve->parsed()) return cmd_solve(solve_args);
        if (compare->parsed()) return cmd_compare(compare_args);
        if (gen->parsed()) return cmd_gen(gen_args);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const cgest::FactorBreakdown& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const cgest::CgBreakdown& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
