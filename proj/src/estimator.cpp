#include "cgest/estimator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cgest {

std::vector<AcceptedEstimate> adaptive_step(AdaptiveState& st, const TermHistory& h,
                                            index_t ell) {
    if (st.k + st.d != ell - 1) {
        throw std::logic_error("delay controller: k + d = " + std::to_string(st.k + st.d) +
                               " does not match iteration " + std::to_string(ell) + " - 1");
    }
    std::vector<AcceptedEstimate> out;
    st.m = find_window_start(h, st.k, ell, st.window_tol);
    st.S = safety_factor(h, st.m, st.k, st.d);
    const double term_ell = h.term(ell);
    double delta = h.delta(st.k, st.k + st.d);
    while (st.d >= st.d_min && st.S * term_ell / delta <= st.tau) {
        AcceptedEstimate est;
        est.k = st.k;
        est.d_used = st.d;
        est.delta = delta;
        est.delta_plus = h.delta(st.k, ell);
        est.upper_heuristic = heuristic_upper(delta, st.tau);
        out.push_back(est);
        st.k += 1;
        st.d -= 1;
        if (st.d >= 0) delta = h.delta(st.k, st.k + st.d);
    }
    st.d += 1;
    return out;
}

void ritz_init(RitzState& rs, double gamma0) {
    rs.rho = gamma0;
    rs.tau_inc = rs.rho;
    rs.sigma = 0.0;
    rs.s = 0.0;
    rs.c = 1.0;
    rs.chi = 0.0;
    rs.mu = 1.0 / rs.rho;
    rs.pi = 1.0;
}

void ritz_update(RitzState& rs, double beta_k, double gamma_prev, double gamma_cur) {
    const double sigma = -std::sqrt(gamma_cur * beta_k / gamma_prev) *
                         (rs.s * rs.sigma + rs.c * rs.tau_inc);
    const double tau_inc = gamma_cur * (beta_k * rs.tau_inc / gamma_prev + 1.0);
    const double diff = rs.rho - tau_inc;
    const double chi = std::sqrt(diff * diff + 4.0 * sigma * sigma);
    // chi = 0 only when diff = sigma = 0; the ratio diff/chi then has
    // continuity limit 0, giving c^2 = 1/2.
    const double c2 = chi == 0.0 ? 0.5 : 0.5 * (1.0 - diff / chi);
    rs.rho = rs.rho + chi * c2;
    rs.s = std::sqrt(1.0 - c2);
    rs.c = std::sqrt(c2) * (sigma < 0.0 ? -1.0 : 1.0);
    rs.sigma = sigma;
    rs.tau_inc = tau_inc;
    rs.chi = chi;
    rs.mu = 1.0 / rs.rho;
    rs.pi = rs.pi / (rs.pi + beta_k);
}

double phi_value(const RitzState& rs, double rz) { return rs.pi / rs.mu * rz; }

bool initial_phase_step(AdaptiveState& st, const RitzState& rs, const TermHistory& h,
                        const IterationEvent& ev) {
    const double phi = phi_value(rs, ev.rz);
    const bool over = phi / h.prefix(st.d) < st.tau;
    if (!over) st.d += 1;
    return over;
}

void gauss_radau_init(GaussRadauState& gr, double mu) {
    if (!(mu > 0.0)) {
        throw std::invalid_argument("quadrature anchor mu must be positive, got " +
                                    std::to_string(mu));
    }
    gr.mu_fixed = mu;
    gr.gamma_mu = 1.0 / mu;
}

bool gauss_radau_update(GaussRadauState& gr, double gamma_prev, double beta_cur) {
    const double num = gr.gamma_mu - gamma_prev;
    const double den = gr.mu_fixed * num + beta_cur;
    if (den <= 0.0 || num < 0.0) return false;
    gr.gamma_mu = num / den;
    return true;
}

double omega_bound(const TermHistory& h, double gamma_mu_kd, double rz_kd, index_t k,
                   index_t d) {
    const double tail = gamma_mu_kd * rz_kd;
    return d >= 1 ? h.delta(k, k + d - 1) + tail : tail;
}

double heuristic_upper(double delta, double tau) { return delta / (1.0 - tau); }

bool ideal_ratio_check(double eps_k, double eps_kd1, double tau) {
    return eps_kd1 <= tau * eps_k;
}

double xnorm_a_estimate(const TermHistory& h, index_t ell, const DenseVector& b,
                        const DenseVector& x0, const DenseVector& r0) {
    return h.prefix(ell) + dot(b, x0) + dot(r0, x0);
}

bool stop_decision(const AcceptedEstimate& est, const StopRule& rule, double xnorm_a_sq) {
    switch (rule.policy) {
        case StopPolicy::none:
            return false;
        case StopPolicy::absolute:
            return std::sqrt(est.upper_heuristic) <= rule.threshold;
        case StopPolicy::relative:
            return xnorm_a_sq > 0.0 &&
                   est.upper_heuristic / xnorm_a_sq <= rule.threshold * rule.threshold;
    }
    return false;
}

AdaptiveEstimator::AdaptiveEstimator(const EstimatorConfig& cfg, double xnorm_base)
    : cfg_(cfg), xnorm_base_(xnorm_base) {
    if (!(cfg.tau > 0.0 && cfg.tau < 1.0)) {
        throw std::invalid_argument("estimator tolerance tau must lie in (0,1), got " +
                                    std::to_string(cfg.tau));
    }
    if (!(cfg.window_tol > 0.0)) {
        throw std::invalid_argument("window tolerance must be positive");
    }
    if (cfg.d_min < 0) {
        throw std::invalid_argument("d_min must be nonnegative");
    }
    state_.tau = cfg.tau;
    state_.window_tol = cfg.window_tol;
    state_.d_min = cfg.d_min;
    gr_enabled_ = cfg.gauss_radau_mu.has_value();
    initial_mode_ = cfg.initial_phase;
    phase_over_ = !cfg.initial_phase;
}

std::optional<double> AdaptiveEstimator::gamma_mu_at(index_t k) const {
    if (k < 0 || static_cast<std::size_t>(k) >= gamma_mu_hist_.size()) return std::nullopt;
    return gamma_mu_hist_[static_cast<std::size_t>(k)];
}

ObserveResult AdaptiveEstimator::observe(const IterationEvent& ev) {
    const index_t ell = ev.k;
    if (ell != history_.size()) {
        throw std::logic_error("estimator: expected event for iteration " +
                               std::to_string(history_.size()) + ", got " +
                               std::to_string(ell));
    }
    history_.push(ev.gamma * ev.rz);
    rz_hist_.push_back(ev.rz);

    if (ell == 0) {
        ritz_init(ritz_, ev.gamma);
    } else {
        ritz_update(ritz_, prev_beta_next_, prev_gamma_, ev.gamma);
    }
    mu_hist_.push_back(ritz_.mu);
    phi_hist_.push_back(phi_value(ritz_, ev.rz));

    if (gr_enabled_ && !gr_failed_) {
        bool alive = true;
        if (ell == 0) {
            gauss_radau_init(gr_, *cfg_.gauss_radau_mu);
        } else {
            alive = gauss_radau_update(gr_, prev_gamma_, prev_beta_next_);
        }
        if (alive) {
            gamma_mu_hist_.push_back(gr_.gamma_mu);
        } else {
            gr_failed_ = true;
        }
    }

    ObserveResult res;
    const bool in_initial = initial_mode_ && !phase_over_;
    if (in_initial) {
        if (initial_phase_step(state_, ritz_, history_, ev)) {
            phase_over_ = true;
            d0_ = state_.d;
        }
    } else if (ell >= 1) {
        res.accepted = adaptive_step(state_, history_, ell);
        for (AcceptedEstimate& est : res.accepted) {
            const index_t tail = est.k + est.d_used;
            if (gr_enabled_ && static_cast<std::size_t>(tail) < gamma_mu_hist_.size()) {
                est.omega = omega_bound(history_, gamma_mu_hist_[static_cast<std::size_t>(tail)],
                                        rz_hist_[static_cast<std::size_t>(tail)], est.k,
                                        est.d_used);
            }
            accepted_.push_back(est);
        }
        if (!accepted_.empty() && cfg_.stop.policy != StopPolicy::none) {
            res.stop = stop_decision(accepted_.back(), cfg_.stop, xnorm_a(ell));
        }
    }
    prev_gamma_ = ev.gamma;
    prev_beta_next_ = ev.beta_next;
    return res;
}

}  // namespace cgest
