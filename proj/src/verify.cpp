#include "fixtime/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fixtime/gain_aut.hpp"
#include "fixtime/gain_nonaut.hpp"

namespace fixtime {

namespace {

// Time left to coast from the eps_settle sphere down to the origin. The
// observed stopping time undershoots the exact settling time by this much,
// so Match tolerance has to absorb it.
double eps_tail_slack(const SystemSpec& spec, double x0_norm, double eps) {
    if (spec.autonomous()) {
        double v_eps = eps;
        if (spec.base == BaseKind::LinearMatrix) v_eps *= std::sqrt(spec.lambda_max_P);
        return predict_settling_aut(*spec.aut, v_eps, spec.T_c);
    }
    if (spec.base == BaseKind::LinearMatrix) return 0.0;  // no catalog formula
    if (x0_norm <= eps) return 0.0;
    const double bt_full =
        base_settling(spec, x0_norm * Eigen::VectorXd::Unit(spec.dim, 0));
    const double bt_eps = base_time_to_norm(spec, x0_norm, eps);
    return predict_settling_nonaut(*spec.nonaut, bt_full) -
           psi_of_tau(*spec.nonaut, bt_eps);
}

double three_point_deriv(double t0, double f0, double t1, double f1, double t2,
                         double f2) {
    const double d1 = t1 - t0, d2 = t2 - t1;
    return -d2 / (d1 * (d1 + d2)) * f0 + (d2 - d1) / (d1 * d2) * f1 +
           d1 / (d2 * (d1 + d2)) * f2;
}

}  // namespace

SettlingReport certify_settling(const SystemSpec& spec, const Eigen::VectorXd& x0,
                                const IntegratorConfig& cfg) {
    SettlingReport rep;
    rep.eps_settle = cfg.eps_settle;

    const double x0_norm = x0.stableNorm();
    if (spec.autonomous()) {
        rep.predicted = predict_settling_aut(*spec.aut, lyapunov_V(spec, x0), spec.T_c);
    } else {
        rep.predicted = predict_settling_nonaut(*spec.nonaut, base_settling(spec, x0));
    }

    Trajectory traj = integrate(spec, x0, cfg);
    rep.steps = traj.steps;
    rep.observed = traj.times.back() - spec.t0;
    rep.abs_gap = std::abs(rep.predicted - rep.observed);

    const double tol = std::max(1e-3, 10.0 * eps_tail_slack(spec, x0_norm, cfg.eps_settle));
    switch (traj.reason) {
        case StopReason::Settled:
            rep.verdict = rep.abs_gap <= tol ? Verdict::Match : Verdict::PredictUnreached;
            break;
        case StopReason::Horizon: {
            // The state may still sit just above eps_settle when the guard band
            // around T_c is reached; a norm commensurate with the band width
            // counts as settled at the stopping time.
            const double band = std::max(cfg.eps_settle, 10.0 * x0_norm * cfg.horizon_guard);
            const bool arrived = traj.states.back().stableNorm() <= band;
            rep.verdict = (arrived && rep.abs_gap <= tol) ? Verdict::Match
                                                          : Verdict::PredictUnreached;
            break;
        }
        case StopReason::Budget:
            rep.verdict = Verdict::Diverged;
            break;
    }
    return rep;
}

SweepReport least_ubst_sweep(const SystemSpec& spec, const std::vector<double>& norms,
                             const IntegratorConfig& cfg) {
    if (norms.empty()) throw ValidationError("least_ubst_sweep: empty norm list");
    for (std::size_t i = 0; i < norms.size(); ++i) {
        if (!std::isfinite(norms[i]) || norms[i] < 0.0) {
            throw ValidationError("least_ubst_sweep: norms must be finite and >= 0");
        }
        if (i > 0 && norms[i] <= norms[i - 1]) {
            throw ValidationError("least_ubst_sweep: norms must be strictly increasing");
        }
    }

    SweepReport rep;
    rep.x0_norms = norms;
    for (double n : norms) {
        const Eigen::VectorXd x0 = n * Eigen::VectorXd::Unit(spec.dim, 0);
        const SettlingReport r = certify_settling(spec, x0, cfg);
        rep.predicted.push_back(r.predicted);
        rep.observed.push_back(r.observed);
    }
    const double mono_slack = 2.0 * std::max(cfg.rel_tol * spec.T_c, 1e-12);
    for (std::size_t i = 1; i < rep.observed.size(); ++i) {
        if (rep.observed[i] < rep.observed[i - 1] - mono_slack) rep.monotone_ok = false;
    }
    rep.sup_observed = *std::max_element(rep.observed.begin(), rep.observed.end());
    rep.sup_gap = spec.T_c - rep.sup_observed;
    return rep;
}

LyapunovCheck lyapunov_check(const SystemSpec& spec, const Trajectory& traj) {
    const std::size_t n = traj.times.size();
    if (n < 5) {
        throw ValidationError("lyapunov_check: trajectory too short (need at least 5 samples)");
    }

    LyapunovCheck chk;
    bool all_zero = true;
    for (double v : traj.lyap) {
        if (v > 0.0) {
            all_zero = false;
            break;
        }
    }
    if (all_zero) {
        chk.samples = n;
        return chk;
    }

    // Gains blow up at the horizon of a non-autonomous gain; the finite
    // difference is meaningless there, so the last stretch is skipped.
    const double span = traj.times.back() - traj.times.front();
    const double cut = spec.autonomous()
                           ? traj.times.back()
                           : traj.times.front() + 0.99 * span;

    double max_violation = -std::numeric_limits<double>::infinity();
    double max_abs = 0.0;
    double gain_scale = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (traj.times[i + 1] > cut) break;
        const double dv =
            three_point_deriv(traj.times[i - 1], traj.lyap[i - 1], traj.times[i],
                              traj.lyap[i], traj.times[i + 1], traj.lyap[i + 1]);
        const double r =
            dv + traj.gains[i] / spec.T_c * base_H(spec, traj.lyap[i]);
        max_violation = std::max(max_violation, r);
        max_abs = std::max(max_abs, std::abs(r));
        gain_scale = std::max(gain_scale, traj.gains[i]);
        ++used;
    }
    if (used == 0) {
        throw ValidationError("lyapunov_check: no usable samples away from the horizon");
    }
    chk.max_violation = max_violation;
    chk.equality_residual = max_abs;
    chk.gain_scale = gain_scale;
    chk.samples = used;
    return chk;
}

}  // namespace fixtime
