/// @file run_driver.hpp
/// @brief Instrumented solves and convergence-record serialization.

#ifndef CGEST_RUN_DRIVER_HPP
#define CGEST_RUN_DRIVER_HPP

#include <iosfwd>
#include <optional>
#include <vector>

#include "cgest/estimator.hpp"
#include "cgest/oracle.hpp"
#include "cgest/preconditioner.hpp"
#include "cgest/solver.hpp"

namespace cgest {

/// Everything an instrumented solve needs beyond the linear system itself.
struct RunConfig {
    double tau = 0.25;
    double window_tol = 1e-4;
    index_t d_min = 0;
    bool initial_phase = false;
    std::optional<double> mu;  ///< quadrature anchor; enables the omega column
    StopRule stop;
    index_t max_iter = 10000;
    double residual_floor_rel = 0.0;
};

/// One output row per released estimate (iteration k).
struct IterationRecord {
    index_t k = 0;
    index_t accepted_d = 0;
    double delta = 0.0;
    double delta_plus = 0.0;
    double upper_heuristic = 0.0;
    std::optional<double> omega;
    double mu_k = 0.0;   ///< Ritz-side eigenvalue gauge at iteration k
    double phi_k = 0.0;  ///< startup-guard gauge at iteration k
    bool stopped = false;
    double tau = 0.0;
    // truth columns, present in comparison runs only
    std::optional<double> eps_true;
    std::optional<double> rel_err_lower;
    std::optional<double> rel_err_upper;
    std::optional<double> rel_err_omega;
    std::optional<index_t> ideal_d;
};

struct InstrumentedRun {
    StopReason reason = StopReason::max_iter;
    bool estimator_stopped = false;  ///< reason == consumer and the stop rule fired
    index_t iterations = 0;
    DenseVector x;
    double final_rnorm2 = 0.0;
    std::vector<IterationRecord> records;
    std::vector<AcceptedEstimate> accepted;
    std::vector<IterationEvent> events;
    double xnorm_a_sq = 0.0;  ///< final lower estimate of ||x||_A^2
    bool gauss_radau_died = false;
    index_t initial_d0 = -1;
};

InstrumentedRun run_instrumented(const CsrMatrix& A, const DenseVector& b,
                                 const DenseVector& x0, const Preconditioner& P,
                                 const RunConfig& cfg,
                                 const StateObserver& on_state = nullptr);

/// Instrumented solve joined with the dense truth: per-iterate true errors,
/// spectral extremes of the (preconditioned) operator, and per-release
/// quality columns.  When auto_mu is set and cfg.mu is empty, the
/// quadrature anchor is taken from the operator's smallest eigenvalue.
struct CompareResult {
    InstrumentedRun run;
    TruthTrace trace;
    BoundQuality quality;
    EigExtremes extremes;
    DenseVector x_true;
    double mu_used = 0.0;
};

CompareResult run_compare(const CsrMatrix& A, const DenseVector& b, const DenseVector& x0,
                          const Preconditioner& P, const RunConfig& cfg, bool auto_mu = true);

/// CSV with a fixed column order, 17-significant-digit floats, LF endings,
/// empty cells for absent optionals.  with_truth appends the comparison
/// columns.
void write_csv(std::ostream& os, const std::vector<IterationRecord>& records,
               bool with_truth);

/// One JSON object per line, same fields; absent optionals are omitted.
void write_jsonl(std::ostream& os, const std::vector<IterationRecord>& records,
                 bool with_truth);

}  // namespace cgest

#endif  // CGEST_RUN_DRIVER_HPP
