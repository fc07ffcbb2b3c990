#pragma once

#include <functional>

#include <Eigen/Dense>

#include "fixtime/numerics.hpp"
#include "fixtime/shapes.hpp"

namespace fixtime {

// Families of normalized densities Phi on [0, inf): unit mass, Phi(0) = +inf,
// positive elsewhere. Composed is the combinator product (a user density F
// pushed through a shape), the other four are the built-in catalog.
enum class AutFamily { PolyBeta, ExpSqrt, Exp, Sinusoid, Composed };

const char* aut_family_name(AutFamily f);

struct AutParams {
    double alpha = 1.0;  // PolyBeta and Sinusoid
    double beta = 1.0;   // PolyBeta only
    double p = 0.5;      // PolyBeta only
    double q = 2.0;      // PolyBeta only
    double k = 1.0;      // PolyBeta only
};

struct AutGain {
    AutFamily family = AutFamily::Exp;
    AutParams params;
    ShapeFn shape;
    // Normalization constant, always derived: gamma for PolyBeta, rho for
    // Sinusoid, the raw density mass M for Composed, 1 otherwise.
    double norm = 1.0;
    std::function<double(double)> density;  // Composed only: the raw F
};

// Validates the family's parameter inequalities (error messages name the
// violated one), derives the normalization constant, and cross-checks it
// against direct quadrature of Phi; a mismatch beyond 1e-6 is a hard error.
AutGain make_aut_gain(AutFamily family, const AutParams& params, const ShapeFn& shape);

// Phi(z) = (1/M) F(h(z)) h'(z) from a positive density F with finite mass M.
// Requires a K_inf^inf shape. The normalization of the result is verified by
// quadrature; failure is a validation error.
AutGain compose_from_density(const std::function<double(double)>& F, const ShapeFn& shape);

// Phi(0) is +inf by construction; finite positive for z > 0. Underflows to 0
// for extreme z on the exponential-tail families; log_phi is exact there.
double phi(const AutGain& g, double z);
double log_phi(const AutGain& g, double z);  // z > 0

// min((Phi(V) * H)^{-1}, cap), evaluated in log space so that intermediate
// overflow cannot occur. H is the base-dependent factor (V itself for the
// plain construction).
double psi_gain_aut(const AutGain& g, double V, double H, double cap = 1e12);

// -(1/T_c) (Phi(|x|) |x|)^{-1} x, zero at x = 0.
Eigen::VectorXd psi_vector_field(const AutGain& g, const Eigen::VectorXd& x, double T_c,
                                 double gain_cap = 1e12);

// T_c * int_0^{x0_norm} Phi(z) dz, in [0, T_c].
double predict_settling_aut(const AutGain& g, double x0_norm, double T_c,
                            double quad_tol = 1e-10);

// int_0^upto Phi(z) dz (upto may be +inf). The endpoint singularity at 0 and
// the tails are handled per family; backs predict_settling_aut and the
// construction-time normalization cross-check.
QuadratureResult phi_mass(const AutGain& g, double upto, double tol = 1e-8);

// int_0^inf (sin u + alpha)(1+u)^{-2} du, period-split head plus asymptotic
// tail. Independent route to the Sinusoid normalization constant.
QuadratureResult sinusoid_norm_quadrature(double alpha, double tol = 1e-10);

}  // namespace fixtime
