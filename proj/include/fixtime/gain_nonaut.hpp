#pragma once

#include "fixtime/numerics.hpp"
#include "fixtime/shapes.hpp"

namespace fixtime {

enum class NonAutFamily { TBG, Secant, ErfInv, BetaInv };

const char* nonaut_family_name(NonAutFamily f);

struct NonAutParams {
    double alpha = 1.0;  // TBG exponent (>= 0) or BetaInv alpha
    double beta = 2.0;   // BetaInv
    double p = 0.5;      // BetaInv
    double q = 2.0;      // BetaInv
    double k = 1.0;      // BetaInv
};

// Time-varying gain, singular as t_hat -> T_c^- and equal to 1 past T_c.
// eta is the profile shape: class K_{T_c}^1 for TBG, class K_inf^inf for the
// other rows (where the formulas use its inverse and derivative).
struct NonAutGain {
    NonAutFamily family = NonAutFamily::TBG;
    NonAutParams params;
    ShapeFn eta;
    double T_c = 1.0;
    double gain_cap = 1e12;  // configurable G_max

    // TBG built from a raw K_{T_c}^inf profile (tbg_from_shape); eta unused.
    bool custom_profile = false;
    ShapeFn profile;

    // BetaInv derived constants.
    double m_p = 0.0, m_q = 0.0, beta_complete = 0.0, gamma_c = 0.0;
};

struct GainEval {
    double value = 0.0;
    bool clamped = false;
};

NonAutGain make_nonaut_gain(NonAutFamily family, const NonAutParams& params,
                            const ShapeFn& eta, double T_c, double gain_cap = 1e12);

// The TBG row from an unbounded profile h in K_{T_c}^inf directly:
// gain(t_hat) = T_c * h'(t_hat).
NonAutGain tbg_from_shape(const ShapeFn& profile, double T_c, double gain_cap = 1e12);

// Gain at elapsed time t_hat >= 0. Returns 1 for t_hat >= T_c. Values above
// the cap, or evaluations within 1e-14 of T_c (where the closed forms are
// pure cancellation), come back clamped with the flag set.
GainEval gain_value_ex(const NonAutGain& g, double t_hat, double cap);
GainEval gain_value_ex(const NonAutGain& g, double t_hat);  // cap = g.gain_cap
double gain_value(const NonAutGain& g, double t_hat);

// The underlying normalized density and the time-scale map it induces:
// psi(tau) = T_c * int_0^tau phi, mapping [0, inf) onto [0, T_c).
double phi_of_tau(const NonAutGain& g, double tau);
double psi_of_tau(const NonAutGain& g, double tau);

// psi(base settling time); exactly T_c when the base time is +inf.
double predict_settling_nonaut(const NonAutGain& g, double base_settling_time);

}  // namespace fixtime
