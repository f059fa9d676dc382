/// @file solver.hpp
/// @brief Preconditioned conjugate-gradient iteration with an event stream.

#ifndef CGEST_SOLVER_HPP
#define CGEST_SOLVER_HPP

#include <functional>
#include <stdexcept>

#include "cgest/csr_matrix.hpp"
#include "cgest/dense_vector.hpp"
#include "cgest/preconditioner.hpp"

namespace cgest {

/// Thrown when the iteration cannot continue: p^T A p <= 0 or z^T r <= 0
/// while the residual is still nonzero.  Both indicate a matrix or
/// preconditioner that is not positive definite (or a fatal loss of
/// orthogonality).
struct CgBreakdown : std::runtime_error {
    explicit CgBreakdown(const std::string& what) : std::runtime_error(what) {}
};

/// State after k completed steps of preconditioned conjugate gradients.
struct SolverState {
    index_t k = 0;
    DenseVector x;
    DenseVector r;  ///< recursively updated residual b - A x_k
    DenseVector z;  ///< M^{-1} r_k
    DenseVector p;  ///< search direction for step k
    double rz = 0.0;      ///< z_k^T r_k
    double rnorm2 = 0.0;  ///< ||r_k||^2
};

/// Scalars produced by step k (the update x_k -> x_{k+1}).  All fields
/// except beta_next describe quantities *before* the update.
struct IterationEvent {
    index_t k = 0;
    double gamma = 0.0;      ///< step length gamma_k = z_k^T r_k / p_k^T A p_k
    double rz = 0.0;         ///< z_k^T r_k
    double rnorm2 = 0.0;     ///< ||r_k||^2
    double pnorm2 = 0.0;     ///< ||p_k||^2
    double beta_next = 0.0;  ///< beta_{k+1} = z_{k+1}^T r_{k+1} / z_k^T r_k
};

SolverState cg_init(const CsrMatrix& A, const DenseVector& b, const DenseVector& x0,
                    const Preconditioner& P);

/// Advances the state by one step and reports the step's scalars.
/// Precondition: st.rnorm2 > 0.
IterationEvent cg_iter(const CsrMatrix& A, const Preconditioner& P, SolverState& st);

enum class StopReason {
    consumer,           ///< the event consumer requested the stop
    residual_floor,     ///< ||r_k|| fell to (or below) the configured floor
    max_iter,           ///< iteration budget exhausted
    already_converged,  ///< ||b - A x_0|| was already at the floor
};

struct SolverControls {
    index_t max_iter = 10000;
    /// Halt when ||r_k|| <= residual_floor_rel * ||b||.  A residual of
    /// exactly zero always halts, so 0 disables everything but that guard.
    double residual_floor_rel = 0.0;
};

struct RunResult {
    StopReason reason = StopReason::max_iter;
    index_t iterations = 0;  ///< completed steps; state.x is x_{iterations}
    SolverState state;
};

/// Consumer sees every IterationEvent; returning true stops the run after
/// that step.
using EventConsumer = std::function<bool(const IterationEvent&)>;

/// Observer sees the state once right after initialization (iterate 0) and
/// again after every completed step.
using StateObserver = std::function<void(const SolverState&)>;

RunResult run_cg(const CsrMatrix& A, const DenseVector& b, const DenseVector& x0,
                 const Preconditioner& P, const SolverControls& controls,
                 const EventConsumer& on_event = nullptr,
                 const StateObserver& on_state = nullptr);

}  // namespace cgest

#endif  // CGEST_SOLVER_HPP
