#include "cgest/solver.hpp"

#include <string>

namespace cgest {

SolverState cg_init(const CsrMatrix& A, const DenseVector& b, const DenseVector& x0,
                    const Preconditioner& P) {
    if (static_cast<index_t>(b.size()) != A.n || static_cast<index_t>(x0.size()) != A.n) {
        throw std::invalid_argument("cg_init: dimension mismatch");
    }
    SolverState st;
    st.k = 0;
    st.x = x0;
    st.r = b;
    const DenseVector Ax = matvec(A, x0);
    for (std::size_t i = 0; i < st.r.size(); ++i) st.r[i] -= Ax[i];
    st.z = P.apply(st.r);
    st.p = st.z;
    st.rz = dot(st.r, st.z);
    st.rnorm2 = norm2_squared(st.r);
    if (st.rz <= 0.0 && st.rnorm2 > 0.0) {
        throw CgBreakdown("z_0^T r_0 = " + std::to_string(st.rz) +
                          " <= 0 with nonzero residual: preconditioner is not positive definite");
    }
    return st;
}

IterationEvent cg_iter(const CsrMatrix& A, const Preconditioner& P, SolverState& st) {
    if (st.rz <= 0.0) {
        throw CgBreakdown("z_k^T r_k = " + std::to_string(st.rz) + " <= 0 at iteration " +
                          std::to_string(st.k));
    }
    const DenseVector Ap = matvec(A, st.p);
    const double pAp = dot(st.p, Ap);
    if (pAp <= 0.0) {
        throw CgBreakdown("p^T A p = " + std::to_string(pAp) + " <= 0 at iteration " +
                          std::to_string(st.k) + ": matrix is not positive definite");
    }

    IterationEvent ev;
    ev.k = st.k;
    ev.rz = st.rz;
    ev.rnorm2 = st.rnorm2;
    ev.pnorm2 = norm2_squared(st.p);
    ev.gamma = st.rz / pAp;

    axpy(ev.gamma, st.p, st.x);
    axpy(-ev.gamma, Ap, st.r);
    st.z = P.apply(st.r);
    const double rz_next = dot(st.r, st.z);
    ev.beta_next = rz_next / st.rz;
    for (std::size_t i = 0; i < st.p.size(); ++i) {
        st.p[i] = st.z[i] + ev.beta_next * st.p[i];
    }
    st.rz = rz_next;
    st.rnorm2 = norm2_squared(st.r);
    ++st.k;
    return ev;
}

RunResult run_cg(const CsrMatrix& A, const DenseVector& b, const DenseVector& x0,
                 const Preconditioner& P, const SolverControls& controls,
                 const EventConsumer& on_event, const StateObserver& on_state) {
    RunResult res;
    res.state = cg_init(A, b, x0, P);
    if (on_state) on_state(res.state);

    const double floor2 = controls.residual_floor_rel * controls.residual_floor_rel *
                          norm2_squared(b);
    if (res.state.rnorm2 <= floor2) {
        res.reason = StopReason::already_converged;
        return res;
    }

    while (res.state.k < controls.max_iter) {
        const IterationEvent ev = cg_iter(A, P, res.state);
        res.iterations = res.state.k;
        if (on_state) on_state(res.state);
        const bool consumer_stop = on_event && on_event(ev);
        if (consumer_stop) {
            res.reason = StopReason::consumer;
            return res;
        }
        if (res.state.rnorm2 <= floor2) {
            res.reason = StopReason::residual_floor;
            return res;
        }
    }
    res.reason = StopReason::max_iter;
    return res;
}

}  // namespace cgest
