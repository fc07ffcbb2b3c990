#include "fixtime/gain_aut.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fixtime/specfun.hpp"

namespace fixtime {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double pi = 3.14159265358979323846;

void combine(QuadratureResult& acc, const QuadratureResult& piece) {
    acc.value += piece.value;
    acc.abs_error_estimate += piece.abs_error_estimate;
    acc.evaluations += piece.evaluations;
}

// --- raw density masses in u-space (before shape substitution) ---

// int_0^U (alpha u^p + beta u^q)^(-k) du. The u -> w^(1/(1-kp)) change of
// variables flattens the u^(-kp) endpoint; the far piece uses s = u^(-(kq-1))
// which maps [1, inf) onto (0, 1] with a bounded smooth integrand.
QuadratureResult poly_mass(const AutParams& pr, double U, double tol) {
    const double m = 1.0 / (1.0 - pr.k * pr.p);
    const double e_head = m * (pr.q - pr.p);
    const double r = pr.k * pr.q - 1.0;
    const double e_tail = (pr.q - pr.p) / r;

    QuadratureResult out;
    const double u_head = std::min(U, 1.0);
    if (u_head > 0.0) {
        const double w_hi = std::pow(u_head, 1.0 / m);
        auto f_head = [&pr, m, e_head](double w) {
            return m * std::pow(pr.alpha + pr.beta * std::pow(w, e_head), -pr.k);
        };
        combine(out, quad_knots(f_head, {0.0, w_hi}, 0.5 * tol));
    }
    if (U > 1.0) {
        const double s_lo = std::isinf(U) ? 0.0 : std::pow(U, -r);
        auto f_tail = [&pr, r, e_tail](double s) {
            return std::pow(pr.beta + pr.alpha * std::pow(s, e_tail), -pr.k) / r;
        };
        combine(out, quad_knots(f_tail, {s_lo, 1.0}, 0.5 * tol));
    }
    return out;
}

// int_0^U (2/pi) (e^{2u} - 1)^{-1/2} du; u = w^2 near 0, truncated tail
// beyond u = 45 folded into the error estimate (it is below 2e-20).
QuadratureResult expsqrt_mass(double U, double tol) {
    QuadratureResult out;
    const double u_head = std::min(U, 1.0);
    if (u_head > 0.0) {
        auto f_head = [](double w) {
            return (2.0 / pi) * 2.0 * w / std::sqrt(std::expm1(2.0 * w * w));
        };
        combine(out, quad_knots(f_head, {0.0, std::sqrt(u_head)}, 0.5 * tol));
    }
    if (U > 1.0) {
        const double u_hi = std::min(U, 45.0);
        auto f = [](double u) { return (2.0 / pi) / std::sqrt(std::expm1(2.0 * u)); };
        combine(out, quad_knots(f, {1.0, u_hi}, 0.5 * tol));
        if (U > 45.0) out.abs_error_estimate += (2.0 / pi) * std::exp(-45.0);
    }
    return out;
}

QuadratureResult exp_mass(double U, double tol) {
    const double hi = std::min(U, 50.0);
    QuadratureResult out;
    if (!(hi > 0.0)) return out;
    std::vector<double> knots{0.0};
    for (double c : {1.0, 5.0, 20.0}) {
        if (c < hi) knots.push_back(c);
    }
    knots.push_back(hi);
    out = quad_knots([](double u) { return std::exp(-u); }, knots, tol);
    if (U > 50.0) out.abs_error_estimate += std::exp(-50.0);
    return out;
}

// int_0^U (sin u + alpha)(1+u)^{-2} du. Knots at multiples of pi keep the
// oscillation resolved; past 400*pi an asymptotic tail (terms through W^-5,
// next term below 1e-16) replaces quadrature entirely.
double sin_tail(double alpha, double U) {
    if (std::isinf(U)) return 0.0;
    const double W = 1.0 + U;
    const double c = std::cos(U), s = std::sin(U);
    return alpha / W + c / (W * W) + 2.0 * s / (W * W * W) - 6.0 * c / (W * W * W * W) -
           24.0 * s / (W * W * W * W * W);
}

QuadratureResult sin_mass(double alpha, double U, double tol) {
    const double cutoff = 400.0 * pi;
    auto f = [alpha](double u) {
        const double w = 1.0 + u;
        return (std::sin(u) + alpha) / (w * w);
    };
    const double head_hi = std::min(U, cutoff);
    std::vector<double> knots{0.0};
    while (knots.back() + pi < head_hi - 1e-9) knots.push_back(knots.back() + pi);
    knots.push_back(head_hi);
    QuadratureResult out = quad_knots(f, knots, tol);
    if (U > cutoff) {
        out.value += sin_tail(alpha, cutoff) - sin_tail(alpha, U);
        const double W = 1.0 + cutoff;
        out.abs_error_estimate += 240.0 / std::pow(W, 6.0);
    }
    return out;
}

[[noreturn]] void violated(const char* family, const std::string& what) {
    throw ValidationError(std::string(family) + " requires " + what);
}

void check_positive(const char* family, const char* name, double v) {
    if (!(v > 0.0)) {
        std::ostringstream os;
        os << name << " > 0 (got " << name << " = " << v << ")";
        violated(family, os.str());
    }
}

void require_diverging_deriv(const char* family, const ShapeFn& shape) {
    if (!(shape.deriv(1e-300) > 1e6)) {
        violated(family, std::string("lim h'(z) -> +inf as z -> 0+; shape '") +
                             shape.name + "' does not diverge");
    }
}

double gamma_const(const AutParams& pr) {
    const double mp = (1.0 - pr.k * pr.p) / (pr.q - pr.p);
    const double mq = (pr.k * pr.q - 1.0) / (pr.q - pr.p);
    return specfun::gamma(mp) * specfun::gamma(mq) * std::pow(pr.alpha / pr.beta, mp) /
           (std::pow(pr.alpha, pr.k) * specfun::gamma(pr.k) * (pr.q - pr.p));
}

double rho_const(double alpha) {
    return alpha - specfun::cosint(1.0) * std::cos(1.0) -
           specfun::sinint_shifted(1.0) * std::sin(1.0);
}

void cross_check_normalization(const AutGain& g) {
    const QuadratureResult m = phi_mass(g, inf, 1e-8);
    if (std::abs(m.value - 1.0) > 1e-6) {
        std::ostringstream os;
        os << aut_family_name(g.family)
           << ": normalization cross-check failed: quadrature of Phi gives " << m.value
           << " (derived constant " << g.norm << ")";
        throw NumericalError(os.str());
    }
}

}  // namespace

const char* aut_family_name(AutFamily f) {
    switch (f) {
        case AutFamily::PolyBeta: return "PolyBeta";
        case AutFamily::ExpSqrt: return "ExpSqrt";
        case AutFamily::Exp: return "Exp";
        case AutFamily::Sinusoid: return "Sinusoid";
        case AutFamily::Composed: return "Composed";
    }
    return "?";
}

AutGain make_aut_gain(AutFamily family, const AutParams& params, const ShapeFn& shape) {
    validate_shape(shape);
    if (std::isfinite(shape.domain_sup) || std::isfinite(shape.range_sup)) {
        violated(aut_family_name(family), "a class K_inf^inf shape");
    }

    AutGain g;
    g.family = family;
    g.params = params;
    g.shape = shape;

    switch (family) {
        case AutFamily::PolyBeta: {
            const AutParams& pr = params;
            check_positive("PolyBeta", "alpha", pr.alpha);
            check_positive("PolyBeta", "beta", pr.beta);
            check_positive("PolyBeta", "p", pr.p);
            check_positive("PolyBeta", "q", pr.q);
            check_positive("PolyBeta", "k", pr.k);
            if (!(pr.k * pr.p < 1.0)) {
                std::ostringstream os;
                os << "k*p < 1 (got k*p = " << pr.k * pr.p << ")";
                violated("PolyBeta", os.str());
            }
            if (!(pr.k * pr.q > 1.0)) {
                std::ostringstream os;
                os << "k*q > 1 (got k*q = " << pr.k * pr.q << ")";
                violated("PolyBeta", os.str());
            }
            g.norm = gamma_const(pr);
            break;
        }
        case AutFamily::ExpSqrt:
            g.norm = 1.0;
            break;
        case AutFamily::Exp:
            require_diverging_deriv("Exp", shape);
            g.norm = 1.0;
            break;
        case AutFamily::Sinusoid:
            if (!(params.alpha > 1.0)) {
                std::ostringstream os;
                os << "alpha > 1 (got alpha = " << params.alpha << ")";
                violated("Sinusoid", os.str());
            }
            require_diverging_deriv("Sinusoid", shape);
            g.norm = rho_const(params.alpha);
            break;
        case AutFamily::Composed:
            throw ValidationError(
                "make_aut_gain: Composed gains are built via compose_from_density");
    }

    cross_check_normalization(g);
    return g;
}

AutGain compose_from_density(const std::function<double(double)>& F, const ShapeFn& shape) {
    validate_shape(shape);
    if (std::isfinite(shape.domain_sup) || std::isfinite(shape.range_sup)) {
        throw ValidationError("compose_from_density requires a class K_inf^inf shape");
    }
    // Densities with a bounded oscillating factor (the sinusoid family shape)
    // cost O(1/tol) panels to certify, so walk the tolerance down gracefully
    // instead of insisting on the tightest one.
    QuadratureResult mass;
    double mass_tol = 1e-8;
    for (;; mass_tol *= 10.0) {
        try {
            mass = quad(F, 0.0, inf, mass_tol);
            break;
        } catch (const NumericalError&) {
            if (mass_tol >= 1e-5) throw;
        }
    }
    if (!(mass.value > 0.0) || !std::isfinite(mass.value)) {
        throw ValidationError("compose_from_density: density mass must be positive finite");
    }
    AutGain g;
    g.family = AutFamily::Composed;
    g.shape = shape;
    g.norm = mass.value;
    g.density = F;

    const QuadratureResult m = phi_mass(g, inf, mass_tol);
    if (std::abs(m.value - 1.0) > 1e-6) {
        std::ostringstream os;
        os << "compose_from_density: normalization check failed, quadrature of Phi gives "
           << m.value;
        throw ValidationError(os.str());
    }
    return g;
}

double log_phi(const AutGain& g, double z) {
    if (!(z >= 0.0)) throw ValidationError("log_phi: z must be >= 0");
    if (z == 0.0) return inf;
    const double h = g.shape.value(z);
    const double lhp = std::log(g.shape.deriv(z));
    switch (g.family) {
        case AutFamily::PolyBeta: {
            const AutParams& pr = g.params;
            double lpoly;  // log(alpha h^p + beta h^q), split to avoid overflow
            if (h >= 1.0) {
                lpoly = pr.q * std::log(h) +
                        std::log(pr.beta + pr.alpha * std::pow(h, pr.p - pr.q));
            } else {
                lpoly = pr.p * std::log(h) +
                        std::log(pr.alpha + pr.beta * std::pow(h, pr.q - pr.p));
            }
            return -std::log(g.norm) - pr.k * lpoly + lhp;
        }
        case AutFamily::ExpSqrt: {
            const double lexp = (h > 0.35) ? 2.0 * h + std::log1p(-std::exp(-2.0 * h))
                                           : std::log(std::expm1(2.0 * h));
            return std::log(2.0 / pi) - 0.5 * lexp + lhp;
        }
        case AutFamily::Exp:
            return -h + lhp;
        case AutFamily::Sinusoid:
            return -std::log(g.norm) + std::log(std::sin(h) + g.params.alpha) -
                   2.0 * std::log1p(h) + lhp;
        case AutFamily::Composed:
            return -std::log(g.norm) + std::log(g.density(h)) + lhp;
    }
    throw ValidationError("log_phi: unknown family");
}

double phi(const AutGain& g, double z) {
    if (z == 0.0) return inf;
    return std::exp(log_phi(g, z));
}

double psi_gain_aut(const AutGain& g, double V, double H, double cap) {
    if (!(V > 0.0)) return 1.0;  // the "1 otherwise" branch at the origin
    const double lg = -log_phi(g, V) - std::log(H);
    if (lg >= std::log(cap)) return cap;
    return std::exp(lg);
}

Eigen::VectorXd psi_vector_field(const AutGain& g, const Eigen::VectorXd& x, double T_c,
                                 double gain_cap) {
    if (!(T_c > 0.0)) throw ValidationError("psi_vector_field: T_c must be > 0");
    const double n = x.stableNorm();
    if (n == 0.0) return Eigen::VectorXd::Zero(x.size());
    const double psi = psi_gain_aut(g, n, n, gain_cap);
    return (-psi / T_c) * x;
}

QuadratureResult phi_mass(const AutGain& g, double upto, double tol) {
    if (!(upto >= 0.0)) throw ValidationError("phi_mass: upper limit must be >= 0");
    if (upto == 0.0) return {0.0, 0.0, 1};
    const double U = std::isinf(upto) ? g.shape.range_sup : g.shape.value(upto);
    QuadratureResult raw;
    switch (g.family) {
        case AutFamily::PolyBeta: raw = poly_mass(g.params, U, tol); break;
        case AutFamily::ExpSqrt: raw = expsqrt_mass(U, tol); break;
        case AutFamily::Exp: raw = exp_mass(U, tol); break;
        case AutFamily::Sinusoid: raw = sin_mass(g.params.alpha, U, tol); break;
        case AutFamily::Composed:
            raw = std::isinf(U) ? quad(g.density, 0.0, inf, tol)
                                : quad(g.density, 0.0, U, tol);
            break;
    }
    raw.value /= g.norm;
    raw.abs_error_estimate /= g.norm;
    return raw;
}

double predict_settling_aut(const AutGain& g, double x0_norm, double T_c, double quad_tol) {
    if (!(x0_norm >= 0.0)) throw ValidationError("predict_settling_aut: x0_norm must be >= 0");
    if (!(T_c > 0.0)) throw ValidationError("predict_settling_aut: T_c must be > 0");
    if (x0_norm == 0.0) return 0.0;
    const double v = T_c * phi_mass(g, x0_norm, quad_tol).value;
    return std::clamp(v, 0.0, T_c);
}

QuadratureResult sinusoid_norm_quadrature(double alpha, double tol) {
    if (!(alpha > 1.0)) throw ValidationError("sinusoid_norm_quadrature: alpha must be > 1");
    return sin_mass(alpha, inf, tol);
}

}  // namespace fixtime
