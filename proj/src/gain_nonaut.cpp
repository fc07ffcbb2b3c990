#include "fixtime/gain_nonaut.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fixtime/specfun.hpp"

namespace fixtime {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double pi = 3.14159265358979323846;
constexpr double sqrt_pi = 1.7724538509055160273;
constexpr double p_clamp = 1e12;  // BetaInv power-extraction clamp near T_c

[[noreturn]] void violated(const char* family, const std::string& what) {
    throw ValidationError(std::string(family) + " requires " + what);
}

// log of the uncapped gain. BetaInv returns -inf at t_hat = 0 (the density
// diverges there, so the reciprocal gain starts at zero).
double log_raw_gain(const NonAutGain& g, double t_hat) {
    switch (g.family) {
        case NonAutFamily::TBG: {
            if (g.custom_profile) return std::log(g.T_c * g.profile.deriv(t_hat));
            const double eta = g.eta.value(t_hat);
            return std::log(g.T_c * g.eta.deriv(t_hat)) -
                   (g.params.alpha + 1.0) * std::log1p(-eta);
        }
        case NonAutFamily::Secant: {
            // Work from the distance to the horizon so the secant stays exact.
            const double th = pi * (g.T_c - t_hat) / (2.0 * g.T_c);
            const double s = std::sin(th);
            const double u = std::cos(th) / s;  // tan(pi t_hat / (2 T_c))
            return std::log(pi / 2.0) - 2.0 * std::log(s) + std::log(g.eta.deriv(u));
        }
        case NonAutFamily::ErfInv: {
            const double u = specfun::erf_inv(t_hat / g.T_c);
            return std::log(sqrt_pi / 2.0) + u * u + std::log(g.eta.deriv(u));
        }
        case NonAutFamily::BetaInv: {
            const NonAutParams& pr = g.params;
            const double y =
                specfun::inc_beta_inv((t_hat / g.T_c) * g.beta_complete, g.m_p, g.m_q);
            if (y <= 0.0) return -inf;
            double P = y >= 1.0
                           ? p_clamp
                           : std::pow((pr.beta / pr.alpha) * (1.0 / y - 1.0),
                                      1.0 / (pr.p - pr.q));
            P = std::min(P, p_clamp);
            double lpoly;  // log(alpha P^p + beta P^q)
            if (P >= 1.0) {
                lpoly = pr.q * std::log(P) +
                        std::log(pr.beta + pr.alpha * std::pow(P, pr.p - pr.q));
            } else {
                lpoly = pr.p * std::log(P) +
                        std::log(pr.alpha + pr.beta * std::pow(P, pr.q - pr.p));
            }
            return std::log(g.gamma_c) + pr.k * lpoly + std::log(g.eta.deriv(P));
        }
    }
    throw ValidationError("gain_value: unknown family");
}

}  // namespace

const char* nonaut_family_name(NonAutFamily f) {
    switch (f) {
        case NonAutFamily::TBG: return "TBG";
        case NonAutFamily::Secant: return "Secant";
        case NonAutFamily::ErfInv: return "ErfInv";
        case NonAutFamily::BetaInv: return "BetaInv";
    }
    return "?";
}

NonAutGain make_nonaut_gain(NonAutFamily family, const NonAutParams& params,
                            const ShapeFn& eta, double T_c, double gain_cap) {
    if (!(T_c > 0.0)) throw ValidationError("make_nonaut_gain: T_c must be > 0");
    if (!(gain_cap > 0.0)) throw ValidationError("make_nonaut_gain: gain_cap must be > 0");
    validate_shape(eta);

    NonAutGain g;
    g.family = family;
    g.params = params;
    g.eta = eta;
    g.T_c = T_c;
    g.gain_cap = gain_cap;

    if (family == NonAutFamily::TBG) {
        if (!(params.alpha >= 0.0)) {
            std::ostringstream os;
            os << "alpha >= 0 (got alpha = " << params.alpha << ")";
            violated("TBG", os.str());
        }
        const bool k_tc1 = std::isfinite(eta.domain_sup) &&
                           std::abs(eta.domain_sup - T_c) <= 1e-12 * T_c &&
                           eta.range_sup == 1.0;
        if (!k_tc1) {
            violated("TBG", "eta in class K_{T_c}^1 (increasing from [0,T_c) onto [0,1))");
        }
        return g;
    }

    if (std::isfinite(eta.domain_sup) || std::isfinite(eta.range_sup)) {
        violated(nonaut_family_name(family), "eta in class K_inf^inf");
    }
    if (family == NonAutFamily::BetaInv) {
        const NonAutParams& pr = params;
        auto positive = [&](const char* name, double v) {
            if (!(v > 0.0)) {
                std::ostringstream os;
                os << name << " > 0 (got " << name << " = " << v << ")";
                violated("BetaInv", os.str());
            }
        };
        positive("alpha", pr.alpha);
        positive("beta", pr.beta);
        positive("p", pr.p);
        positive("q", pr.q);
        positive("k", pr.k);
        if (!(pr.k * pr.p < 1.0)) {
            std::ostringstream os;
            os << "k*p < 1 (got k*p = " << pr.k * pr.p << ")";
            violated("BetaInv", os.str());
        }
        if (!(pr.k * pr.q > 1.0)) {
            std::ostringstream os;
            os << "k*q > 1 (got k*q = " << pr.k * pr.q << ")";
            violated("BetaInv", os.str());
        }
        g.m_p = (1.0 - pr.k * pr.p) / (pr.q - pr.p);
        g.m_q = (pr.k * pr.q - 1.0) / (pr.q - pr.p);
        g.beta_complete = specfun::inc_beta(1.0, g.m_p, g.m_q);
        g.gamma_c = specfun::gamma(g.m_p) * specfun::gamma(g.m_q) *
                    std::pow(pr.alpha / pr.beta, g.m_p) /
                    (std::pow(pr.alpha, pr.k) * specfun::gamma(pr.k) * (pr.q - pr.p));
    }
    return g;
}

NonAutGain tbg_from_shape(const ShapeFn& profile, double T_c, double gain_cap) {
    if (!(T_c > 0.0)) throw ValidationError("tbg_from_shape: T_c must be > 0");
    validate_shape(profile);
    if (!std::isfinite(profile.domain_sup) ||
        std::abs(profile.domain_sup - T_c) > 1e-12 * T_c ||
        std::isfinite(profile.range_sup)) {
        throw ValidationError(
            "tbg_from_shape requires a class K_{T_c}^inf profile (domain [0,T_c), "
            "unbounded range)");
    }
    NonAutGain g;
    g.family = NonAutFamily::TBG;
    g.T_c = T_c;
    g.gain_cap = gain_cap;
    g.custom_profile = true;
    g.profile = profile;
    return g;
}

GainEval gain_value_ex(const NonAutGain& g, double t_hat, double cap) {
    if (!(t_hat >= 0.0)) throw ValidationError("gain_value: t_hat must be >= 0");
    if (t_hat >= g.T_c) return {1.0, false};
    if (g.T_c - t_hat <= 1e-14) return {cap, true};
    const double lg = log_raw_gain(g, t_hat);
    const double lcap = std::log(cap);
    if (lg >= lcap) return {cap, true};
    return {std::exp(lg), false};
}

GainEval gain_value_ex(const NonAutGain& g, double t_hat) {
    return gain_value_ex(g, t_hat, g.gain_cap);
}

double gain_value(const NonAutGain& g, double t_hat) {
    return gain_value_ex(g, t_hat).value;
}

double psi_of_tau(const NonAutGain& g, double tau) {
    if (!(tau >= 0.0)) throw ValidationError("psi_of_tau: tau must be >= 0");
    switch (g.family) {
        case NonAutFamily::TBG: {
            if (g.custom_profile) return g.profile.inverse(tau);
            const double a = g.params.alpha;
            const double eta_target =
                a > 0.0 ? 1.0 - std::pow(1.0 + a * tau, -1.0 / a) : -std::expm1(-tau);
            return g.eta.inverse(eta_target);
        }
        case NonAutFamily::Secant:
            return (2.0 * g.T_c / pi) * std::atan(g.eta.inverse(tau));
        case NonAutFamily::ErfInv:
            return g.T_c * specfun::erf(g.eta.inverse(tau));
        case NonAutFamily::BetaInv: {
            const NonAutParams& pr = g.params;
            const double u = g.eta.inverse(tau);
            if (u <= 0.0) return 0.0;
            const double y = 1.0 / (1.0 + (pr.alpha / pr.beta) * std::pow(u, pr.p - pr.q));
            return g.T_c * specfun::inc_beta(y, g.m_p, g.m_q) / g.beta_complete;
        }
    }
    throw ValidationError("psi_of_tau: unknown family");
}

// Evaluated directly in tau. Going through psi and the raw gain would invert
// erf or the incomplete beta right back to the tau we started from, and those
// inversions lose the extreme tails (inc_beta_inv cannot resolve arguments
// within ~1e-13 of an endpoint, which this function hits at plain tau ~ 1e-12).
double phi_of_tau(const NonAutGain& g, double tau) {
    if (!(tau >= 0.0)) throw ValidationError("phi_of_tau: tau must be >= 0");
    switch (g.family) {
        case NonAutFamily::TBG: {
            if (g.custom_profile) {
                const double t_hat = g.profile.inverse(tau);
                if (t_hat >= g.T_c) return 0.0;
                return 1.0 / (g.T_c * g.profile.deriv(t_hat));
            }
            const double a = g.params.alpha;
            const double w = a > 0.0 ? std::log1p(a * tau) / a : tau;
            const double t_hat = g.eta.inverse(-std::expm1(-w));
            return std::exp(-(a + 1.0) * w) / (g.T_c * g.eta.deriv(t_hat));
        }
        case NonAutFamily::Secant: {
            const double v = g.eta.inverse(tau);
            return (2.0 / pi) / ((1.0 + v * v) * g.eta.deriv(v));
        }
        case NonAutFamily::ErfInv: {
            const double u = g.eta.inverse(tau);
            return (2.0 / sqrt_pi) * std::exp(-u * u) / g.eta.deriv(u);
        }
        case NonAutFamily::BetaInv: {
            const NonAutParams& pr = g.params;
            const double u = g.eta.inverse(tau);
            if (u <= 0.0) return inf;  // kp < 1 keeps the spike integrable
            double lpoly;
            if (u >= 1.0) {
                lpoly = pr.q * std::log(u) +
                        std::log(pr.beta + pr.alpha * std::pow(u, pr.p - pr.q));
            } else {
                lpoly = pr.p * std::log(u) +
                        std::log(pr.alpha + pr.beta * std::pow(u, pr.q - pr.p));
            }
            return std::exp(-std::log(g.gamma_c) - pr.k * lpoly -
                            std::log(g.eta.deriv(u)));
        }
    }
    throw ValidationError("phi_of_tau: unknown family");
}

double predict_settling_nonaut(const NonAutGain& g, double base_settling_time) {
    if (std::isinf(base_settling_time)) return g.T_c;
    if (!(base_settling_time >= 0.0)) {
        throw ValidationError("predict_settling_nonaut: base settling time must be >= 0");
    }
    return psi_of_tau(g, base_settling_time);
}

}  // namespace fixtime
