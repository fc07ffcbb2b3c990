#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fixtime/dynamics.hpp"
#include "fixtime/numerics.hpp"

namespace fixtime {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Difference between the 5th and embedded 4th order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Recorder {
    const SystemSpec& spec;
    const IntegratorConfig& cfg;
    Trajectory& out;

    void point(double t, const Eigen::VectorXd& x) {
        out.times.push_back(t);
        out.states.push_back(x);
        const double V = lyapunov_V(spec, x);
        out.lyap.push_back(V);
        out.gains.push_back(gain_at(spec, V, t, cfg.gain_cap));
    }
};

}  // namespace

Trajectory integrate(const SystemSpec& spec, const Eigen::VectorXd& x0,
                     const IntegratorConfig& cfg) {
    cfg.validate();
    if (x0.size() != spec.dim) {
        throw ValidationError("integrate: x0 dimension disagrees with spec.dim");
    }
    if (!x0.allFinite()) throw ValidationError("integrate: x0 must be finite");

    Trajectory traj;
    Recorder rec{spec, cfg, traj};
    const double t0 = spec.t0;
    const bool horizon = !spec.autonomous();
    const double t_stop = t0 + spec.T_c * (1.0 - 2.0 * cfg.horizon_guard);

    double t = t0;
    Eigen::VectorXd x = x0;
    rec.point(t, x);
    if (x.stableNorm() <= cfg.eps_settle) {
        traj.settled = true;
        traj.reason = StopReason::Settled;
        return traj;
    }

    auto rhs = [&](double tt, const Eigen::VectorXd& xx) {
        ++traj.field_evals;
        const double th = tt - t0;
        if (th > traj.max_eval_t_hat) traj.max_eval_t_hat = th;
        return field(spec, xx, tt, cfg.gain_cap);
    };

    // Initial step from the local derivative scale.
    Eigen::VectorXd k1 = rhs(t, x);
    double h = 0.01 * (x.stableNorm() + cfg.abs_tol) / (k1.stableNorm() + 1e-300);
    h = std::min(h, spec.T_c / 10.0);
    if (!(h > 0.0) || !std::isfinite(h)) h = spec.T_c / 10.0;

    double err_old = 1e-4;
    std::size_t attempts = 0;
    const int n = spec.dim;
    Eigen::VectorXd k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), xnew(n), yerr(n);

    while (true) {
        if (horizon && t >= t_stop) {
            traj.reason = StopReason::Horizon;
            return traj;
        }
        if (attempts >= cfg.max_steps) {
            traj.reason = StopReason::Budget;
            return traj;
        }
        if (horizon) h = std::min(h, 0.5 * (t0 + spec.T_c - t));
        // A step this small cannot advance the clock; anything larger can, so
        // genuinely stiff phases (capped gains give Lipschitz constants near
        // 1e12 times the state) are allowed to crawl while t is still tiny.
        if (h < 32.0 * std::numeric_limits<double>::epsilon() * std::abs(t)) {
            std::ostringstream os;
            os << "integrate: step size underflow (h = " << h << " at t = " << t << ")";
            throw NumericalError(os.str());
        }
        ++attempts;

        k2 = rhs(t + c2 * h, x + h * (a21 * k1));
        k3 = rhs(t + c3 * h, x + h * (a31 * k1 + a32 * k2));
        k4 = rhs(t + c4 * h, x + h * (a41 * k1 + a42 * k2 + a43 * k3));
        k5 = rhs(t + c5 * h, x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        k6 = rhs(t + h, x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        xnew = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        k7 = rhs(t + h, xnew);
        yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        // Resolution floor of the embedded estimate: component roundoff, plus,
        // for time-varying gains, the state change produced by displacing the
        // stage times by one ulp of t (stage times are quantized at that
        // granularity, which near the horizon perturbs the gain far above the
        // shrinking error scale). Differences below the floor carry no
        // truncation information; rejecting on them would spiral the step
        // size into underflow.
        const double t_quant = spec.autonomous() ? 0.0 : std::abs(t) + h;
        double err = 0.0;
        bool noise_only = true;
        for (int i = 0; i < n; ++i) {
            const double mag = std::max(std::abs(x[i]), std::abs(xnew[i]));
            const double sc = cfg.abs_tol + cfg.rel_tol * mag;
            const double r = yerr[i] / sc;
            err += r * r;
            const double floor = 16.0 * std::numeric_limits<double>::epsilon() *
                                 (mag + t_quant * std::abs(k1[i]));
            if (std::abs(yerr[i]) > floor) noise_only = false;
        }
        err = std::sqrt(err / n);
        if (noise_only && xnew.allFinite()) err = 0.0;

        if (err <= 1.0 || !std::isfinite(err)) {
            if (!std::isfinite(err) || !xnew.allFinite()) {
                // Blowup inside the step; treat like a hard rejection.
                h *= 0.1;
                continue;
            }
            ++traj.steps;
            const double t_next = t + h;
            if (xnew.stableNorm() <= cfg.eps_settle) {
                // Locate the crossing of the eps_settle sphere on the chord.
                double lo = 0.0, hi_th = 1.0;
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi_th);
                    const double nm = (x + mid * (xnew - x)).stableNorm();
                    (nm <= cfg.eps_settle ? hi_th : lo) = mid;
                }
                const double theta = hi_th;
                rec.point(t + theta * h, x + theta * (xnew - x));
                traj.settled = true;
                traj.reason = StopReason::Settled;
                return traj;
            }
            rec.point(t_next, xnew);
            t = t_next;
            x.swap(xnew);
            k1.swap(k7);  // first-same-as-last

            const double safe_err = std::max(err, 1e-10);
            double fac = 0.9 * std::pow(safe_err, -0.7 / 5.0) * std::pow(err_old, 0.4 / 5.0);
            fac = std::clamp(fac, 0.2, 5.0);
            h *= fac;
            err_old = safe_err;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
    }
}

}  // namespace fixtime
