#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fixtime {

// Thrown for bad arguments, bad parameters, malformed specs.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an algorithm fails to converge or a computation degenerates
// (quadrature subdivision limit, step-size underflow, non-Hurwitz matrix...).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
};

struct RootResult {
    double root = 0.0;
    double residual = 0.0;
    std::size_t iterations = 0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

// Adaptive Gauss-Kronrod 7/15 with interval bisection, largest-error-first.
// hi may be +inf; the tail is folded onto [0,1) through u = z/(1+z).
// Endpoint singularities at lo are tolerated (nodes are interior), they just
// cost subdivision depth. Throws NumericalError past the subdivision budget,
// with the best estimate embedded in the message.
QuadratureResult quad(const std::function<double(double)>& f, double lo, double hi,
                      double tol = 1e-10);

// Same engine over a fixed partition; knots must be increasing and finite.
// Used where the integrand's scale structure is known up front (periods of an
// oscillatory factor, decades of a wide interval).
QuadratureResult quad_knots(const std::function<double(double)>& f,
                            const std::vector<double>& knots, double tol = 1e-10);

// Bisection on a monotone bracketing interval. Stops when |f(root)| <= tol or
// the bracket width is <= tol. With a derivative, bisects to a coarse bracket
// and then polishes with safeguarded Newton steps.
RootResult root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-12);
RootResult root_bracketed(const std::function<double(double)>& f,
                          const std::function<double(double)>& df, double lo, double hi,
                          double tol = 1e-12);

struct IntegratorConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    double eps_settle = 1e-8;
    std::size_t max_steps = 2000000;
    // Fraction of T_c kept away from the singular horizon. Stepping stops at
    // t_hat >= T_c*(1 - 2*guard) so that no stage of the 5(4) pair is ever
    // evaluated at or past T_c*(1 - guard).
    double horizon_guard = 1e-12;
    double gain_cap = 1e12;

    void validate() const;
};

enum class Verdict { Match, PredictUnreached, Diverged };

struct SettlingReport {
    double predicted = 0.0;
    double observed = 0.0;
    double eps_settle = 0.0;
    double abs_gap = 0.0;
    Verdict verdict = Verdict::PredictUnreached;
    std::size_t steps = 0;
};

const char* verdict_name(Verdict v);

enum class StopReason { Settled, Horizon, Budget };

const char* stop_reason_name(StopReason r);

struct Trajectory {
    std::vector<double> times;                 // strictly increasing, starts at t0
    std::vector<Eigen::VectorXd> states;
    std::vector<double> gains;                 // Psi value at each sample
    std::vector<double> lyap;                  // V at each sample
    bool settled = false;
    StopReason reason = StopReason::Settled;
    std::size_t steps = 0;                     // accepted steps
    std::size_t field_evals = 0;
    double max_eval_t_hat = -std::numeric_limits<double>::infinity();
};

struct SystemSpec;  // dynamics.hpp

// Dormand-Prince 5(4) with PI step control (safety 0.9, growth clamp
// [0.2, 5]). Terminates on: settle (|x| <= eps_settle, event located by
// bisection on the linearly interpolated accepted step), horizon (time-varying
// gains only, see IntegratorConfig::horizon_guard), or step budget. Step-size
// underflow throws NumericalError.
Trajectory integrate(const SystemSpec& spec, const Eigen::VectorXd& x0,
                     const IntegratorConfig& cfg);

}  // namespace fixtime
