#include "cgest/run_driver.hpp"

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>

#include "json.hpp"

namespace cgest {

InstrumentedRun run_instrumented(const CsrMatrix& A, const DenseVector& b,
                                 const DenseVector& x0, const Preconditioner& P,
                                 const RunConfig& cfg, const StateObserver& on_state) {
    EstimatorConfig ecfg;
    ecfg.tau = cfg.tau;
    ecfg.window_tol = cfg.window_tol;
    ecfg.d_min = cfg.d_min;
    ecfg.initial_phase = cfg.initial_phase;
    ecfg.gauss_radau_mu = cfg.mu;
    ecfg.stop = cfg.stop;

    DenseVector r0 = b;
    const DenseVector Ax0 = matvec(A, x0);
    for (std::size_t i = 0; i < r0.size(); ++i) r0[i] -= Ax0[i];
    AdaptiveEstimator est(ecfg, dot(b, x0) + dot(r0, x0));

    InstrumentedRun out;
    const auto consumer = [&](const IterationEvent& ev) -> bool {
        out.events.push_back(ev);
        const ObserveResult obs = est.observe(ev);
        for (const AcceptedEstimate& a : obs.accepted) {
            IterationRecord rec;
            rec.k = a.k;
            rec.accepted_d = a.d_used;
            rec.delta = a.delta;
            rec.delta_plus = a.delta_plus;
            rec.upper_heuristic = a.upper_heuristic;
            rec.omega = a.omega;
            rec.mu_k = est.mu_at(a.k);
            rec.phi_k = est.phi_at(a.k);
            rec.tau = cfg.tau;
            out.records.push_back(rec);
            out.accepted.push_back(a);
        }
        if (obs.stop) {
            out.estimator_stopped = true;
            return true;
        }
        return false;
    };

    SolverControls controls;
    controls.max_iter = cfg.max_iter;
    controls.residual_floor_rel = cfg.residual_floor_rel;
    RunResult rr = run_cg(A, b, x0, P, controls, consumer, on_state);

    out.reason = rr.reason;
    out.iterations = rr.iterations;
    out.x = std::move(rr.state.x);
    out.final_rnorm2 = rr.state.rnorm2;
    if (est.iterations_seen() > 0) {
        out.xnorm_a_sq = est.xnorm_a(est.iterations_seen() - 1);
    }
    out.gauss_radau_died = est.gauss_radau_enabled() && !est.gauss_radau_alive();
    out.initial_d0 = est.initial_d0();
    if (out.estimator_stopped && !out.records.empty()) {
        out.records.back().stopped = true;
    }
    return out;
}

CompareResult run_compare(const CsrMatrix& A, const DenseVector& b, const DenseVector& x0,
                          const Preconditioner& P, const RunConfig& cfg, bool auto_mu) {
    CompareResult cr;
    cr.x_true = direct_solve(A, b);
    cr.extremes = eig_extremes(A, P);

    RunConfig effective = cfg;
    if (auto_mu && !effective.mu) effective.mu = cr.extremes.mu_safe;
    cr.mu_used = effective.mu.value_or(0.0);

    std::vector<double> eps;
    const auto spy = [&](const SolverState& st) {
        eps.push_back(true_error(A, cr.x_true, st.x));
    };
    cr.run = run_instrumented(A, b, x0, P, effective, spy);
    cr.trace = make_truth_trace(std::move(eps), cr.extremes.lambda_min, cr.extremes.lambda_max);
    cr.quality = bound_quality(cr.trace, cr.run.accepted, effective.tau);

    for (IterationRecord& rec : cr.run.records) {
        const double e = cr.trace.eps[static_cast<std::size_t>(rec.k)];
        rec.eps_true = e;
        if (e > 0.0) {
            rec.rel_err_lower = (e - rec.delta) / e;
            rec.rel_err_upper = (rec.upper_heuristic - e) / e;
            if (rec.omega) rec.rel_err_omega = (*rec.omega - e) / e;
        }
        rec.ideal_d = ideal_delay(cr.trace, rec.k, effective.tau);
    }
    return cr;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

void write_csv(std::ostream& os, const std::vector<IterationRecord>& records,
               bool with_truth) {
    os << "k,accepted_d,delta,delta_plus,upper_heuristic,omega,mu_k,phi_k,stopped";
    if (with_truth) {
        os << ",eps_true,rel_err_lower,rel_err_upper,rel_err_omega,ideal_d,tau";
    }
    os << '\n';
    for (const IterationRecord& r : records) {
        os << r.k << ',' << r.accepted_d << ',' << fmt(r.delta) << ',' << fmt(r.delta_plus)
           << ',' << fmt(r.upper_heuristic) << ',' << fmt_opt(r.omega) << ',' << fmt(r.mu_k)
           << ',' << fmt(r.phi_k) << ',' << (r.stopped ? 1 : 0);
        if (with_truth) {
            os << ',' << fmt_opt(r.eps_true) << ',' << fmt_opt(r.rel_err_lower) << ','
               << fmt_opt(r.rel_err_upper) << ',' << fmt_opt(r.rel_err_omega) << ','
               << (r.ideal_d ? std::to_string(*r.ideal_d) : std::string()) << ','
               << fmt(r.tau);
        }
        os << '\n';
    }
}

void write_jsonl(std::ostream& os, const std::vector<IterationRecord>& records,
                 bool with_truth) {
    for (const IterationRecord& r : records) {
        nlohmann::ordered_json j;
        j["k"] = r.k;
        j["accepted_d"] = r.accepted_d;
        j["delta"] = r.delta;
        j["delta_plus"] = r.delta_plus;
        j["upper_heuristic"] = r.upper_heuristic;
        if (r.omega) j["omega"] = *r.omega;
        j["mu_k"] = r.mu_k;
        j["phi_k"] = r.phi_k;
        j["stopped"] = r.stopped;
        if (with_truth) {
            if (r.eps_true) j["eps_true"] = *r.eps_true;
            if (r.rel_err_lower) j["rel_err_lower"] = *r.rel_err_lower;
            if (r.rel_err_upper) j["rel_err_upper"] = *r.rel_err_upper;
            if (r.rel_err_omega) j["rel_err_omega"] = *r.rel_err_omega;
            if (r.ideal_d) j["ideal_d"] = *r.ideal_d;
            j["tau"] = r.tau;
        }
        os << j.dump() << '\n';
    }
}

}  // namespace cgest
