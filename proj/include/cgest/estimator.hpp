/// @file estimator.hpp
/// @brief Adaptive-delay error estimation for the conjugate-gradient run.

#ifndef CGEST_ESTIMATOR_HPP
#define CGEST_ESTIMATOR_HPP

#include <optional>
#include <vector>

#include "cgest/solver.hpp"
#include "cgest/term_history.hpp"

namespace cgest {

/// One error estimate released by the delay controller.  At release time
/// (iteration ell = k + d_used + 1) the window sums through ell are known,
/// so both the accepted window and the one-term-longer refinement are
/// recorded.  All quantities estimate the squared A-norm of the error at
/// iteration k.
struct AcceptedEstimate {
    index_t k = 0;
    index_t d_used = 0;
    double delta = 0.0;             ///< window sum over k..k+d_used (lower bound)
    double delta_plus = 0.0;        ///< window sum over k..k+d_used+1 (sharper lower bound)
    double upper_heuristic = 0.0;   ///< delta / (1 - tau)
    std::optional<double> omega;    ///< quadrature upper bound, when enabled and alive
};

/// Delay-controller state.  Between controller invocations at successive
/// iterations ell, the invariant k + d == ell - 1 holds.
struct AdaptiveState {
    index_t k = 0;       ///< oldest iteration without a released estimate
    index_t d = 0;       ///< current delay
    double tau = 0.25;   ///< target relative accuracy of released estimates
    double window_tol = 1e-4;  ///< history-window cutoff for the safety factor
    index_t d_min = 0;   ///< floor on the delay at release time
    index_t m = 0;       ///< start of the safety window (diagnostic)
    double S = 0.0;      ///< last safety factor (diagnostic)
};

/// One controller pass at iteration ell (term for ell already pushed).
/// Recomputes m and S, releases estimates while the safety test
/// S * term_ell / delta <= tau holds with d >= d_min, then grows d by one.
/// Returns the released batch in increasing k order (possibly empty).
std::vector<AcceptedEstimate> adaptive_step(AdaptiveState& st, const TermHistory& h,
                                            index_t ell);

/// Incrementally maintained smallest-Ritz-value approximation (mu) and the
/// residual-to-direction norm ratio (pi), both driven by the iteration
/// coefficients alone.
struct RitzState {
    double rho = 0.0;
    double tau_inc = 0.0;  ///< recurrence tau (unrelated to the controller's tolerance)
    double sigma = 0.0;
    double s = 0.0;
    double c = 1.0;
    double chi = 0.0;
    double mu = 0.0;  ///< 1/rho, approaches the smallest eigenvalue from above
    double pi = 1.0;  ///< ||r_k||^2 / ||p_k||^2 of the (preconditioned) system
};

void ritz_init(RitzState& rs, double gamma0);
void ritz_update(RitzState& rs, double beta_k, double gamma_prev, double gamma_cur);

/// phi_k = (pi_k / mu_k) * rz_k, the cheap error-size gauge used by the
/// startup guard.
double phi_value(const RitzState& rs, double rz);

/// Startup guard: while active, no estimate is released; the delay grows
/// until phi_d / (window sum over 0..d) < tau, which fixes the starting
/// delay.  Call at iteration ell == st.d with rs updated through ell.
/// Returns true when the guard ends (st.d is left as the fixed delay).
bool initial_phase_step(AdaptiveState& st, const RitzState& rs, const TermHistory& h,
                        const IterationEvent& ev);

/// Modified-quadrature coefficient recurrence anchored at a prescribed
/// eigenvalue underestimate mu_fixed; yields guaranteed upper bounds while
/// mu_fixed <= lambda_min.
struct GaussRadauState {
    double mu_fixed = 0.0;
    double gamma_mu = 0.0;  ///< coefficient for the current iteration
};

void gauss_radau_init(GaussRadauState& gr, double mu);

/// Advances gamma_mu by one iteration; returns false (state dead, stop
/// using it) when the recurrence leaves its valid regime, which happens
/// when mu_fixed overshoots the smallest eigenvalue.
bool gauss_radau_update(GaussRadauState& gr, double gamma_prev, double beta_cur);

/// Upper bound for the squared error at k released with delay d:
/// window sum over k..k+d-1 plus gamma_mu * rz at iteration k+d
/// (d = 0: the quadrature term alone).
double omega_bound(const TermHistory& h, double gamma_mu_kd, double rz_kd, index_t k,
                   index_t d);

/// delta / (1 - tau); overestimates the true squared error whenever the
/// released estimate met its target accuracy.
double heuristic_upper(double delta, double tau);

/// Oracle-side predicate defining the ideal delay: true when the squared
/// error at k+d+1 has dropped to tau times the squared error at k.
bool ideal_ratio_check(double eps_k, double eps_kd1, double tau);

/// Lower estimate of ||x||_A^2 after ell completed iterations:
/// (window sum over 0..ell) + b.x0 + r0.x0.  Exact once the error term is
/// negligible; with x0 = 0 it reduces to the window sum.
double xnorm_a_estimate(const TermHistory& h, index_t ell, const DenseVector& b,
                        const DenseVector& x0, const DenseVector& r0);

enum class StopPolicy { none, absolute, relative };

struct StopRule {
    StopPolicy policy = StopPolicy::none;
    /// absolute: stop when sqrt(upper_heuristic) <= threshold.
    /// relative: stop when upper_heuristic / ||x||_A^2 <= threshold^2.
    double threshold = 0.0;
};

bool stop_decision(const AcceptedEstimate& est, const StopRule& rule, double xnorm_a_sq);

struct EstimatorConfig {
    double tau = 0.25;
    double window_tol = 1e-4;
    index_t d_min = 0;
    bool initial_phase = false;  ///< enable the startup guard
    std::optional<double> gauss_radau_mu;  ///< eigenvalue underestimate; enables omega
    StopRule stop;
};

struct ObserveResult {
    std::vector<AcceptedEstimate> accepted;  ///< estimates released this iteration
    bool stop = false;                       ///< the configured stop rule fired
};

/// Ties the pieces together over one solve: feed every IterationEvent in
/// order; estimates come back batched per iteration.
class AdaptiveEstimator {
  public:
    /// xnorm_base = b.x0 + r0.x0, the x0-dependent part of ||x||_A^2
    /// (zero for a zero initial guess).
    explicit AdaptiveEstimator(const EstimatorConfig& cfg, double xnorm_base = 0.0);

    ObserveResult observe(const IterationEvent& ev);

    const TermHistory& history() const { return history_; }
    const AdaptiveState& state() const { return state_; }
    const std::vector<AcceptedEstimate>& accepted() const { return accepted_; }

    bool initial_phase_active() const { return initial_mode_ && !phase_over_; }
    /// Delay fixed by the startup guard, or -1 while it is still running
    /// (and forever when the guard is disabled).
    index_t initial_d0() const { return d0_; }
    /// False once the quadrature recurrence died; omega stops appearing.
    bool gauss_radau_alive() const { return gr_enabled_ && !gr_failed_; }
    bool gauss_radau_enabled() const { return gr_enabled_; }

    double xnorm_a(index_t ell) const { return history_.prefix(ell) + xnorm_base_; }
    index_t iterations_seen() const { return history_.size(); }

    double mu_at(index_t k) const { return mu_hist_.at(static_cast<std::size_t>(k)); }
    double phi_at(index_t k) const { return phi_hist_.at(static_cast<std::size_t>(k)); }
    std::optional<double> gamma_mu_at(index_t k) const;

  private:
    EstimatorConfig cfg_;
    AdaptiveState state_;
    TermHistory history_;
    RitzState ritz_;
    GaussRadauState gr_;
    bool gr_enabled_ = false;
    bool gr_failed_ = false;
    bool initial_mode_ = false;
    bool phase_over_ = true;
    index_t d0_ = -1;
    double xnorm_base_ = 0.0;
    double prev_gamma_ = 0.0;
    double prev_beta_next_ = 0.0;
    std::vector<double> rz_hist_;
    std::vector<double> mu_hist_;
    std::vector<double> phi_hist_;
    std::vector<double> gamma_mu_hist_;
    std::vector<AcceptedEstimate> accepted_;
};

}  // namespace cgest

#endif  // CGEST_ESTIMATOR_HPP
