#pragma once

#include <optional>

#include <Eigen/Dense>

#include "fixtime/gain_aut.hpp"
#include "fixtime/gain_nonaut.hpp"
#include "fixtime/numerics.hpp"

namespace fixtime {

enum class BaseKind { Identity, IdentityPlusRoot, LinearMatrix };

const char* base_kind_name(BaseKind b);

// x' = -(1/T_c) Psi(V(x), t - t0) g(x), with exactly one gain variant set.
// V is the Euclidean norm, or sqrt(x'Px) for the LinearMatrix base.
struct SystemSpec {
    int dim = 1;
    double T_c = 1.0;
    double t0 = 0.0;
    std::optional<AutGain> aut;
    std::optional<NonAutGain> nonaut;
    BaseKind base = BaseKind::Identity;
    double root_a = 0.5;  // IdentityPlusRoot exponent, in (0,1)
    Eigen::MatrixXd A;    // LinearMatrix only

    // Derived by finalize_system for LinearMatrix bases.
    Eigen::MatrixXd P;
    double lambda_max_P = 0.0;

    bool autonomous() const { return aut.has_value(); }
};

// Validates the assembled spec (dimensions, parameter ranges, exactly one
// gain, T_c consistency) and solves the Lyapunov equation for LinearMatrix
// bases. Must run before the spec is used.
void finalize_system(SystemSpec& spec);

double lyapunov_V(const SystemSpec& spec, const Eigen::VectorXd& x);
double base_H(const SystemSpec& spec, double V);
Eigen::VectorXd base_g(const SystemSpec& spec, const Eigen::VectorXd& x);

// The Psi factor at Lyapunov level V and absolute time t, capped at gain_cap.
double gain_at(const SystemSpec& spec, double V, double t, double gain_cap = 1e12);

Eigen::VectorXd field(const SystemSpec& spec, const Eigen::VectorXd& x, double t,
                      double gain_cap = 1e12);

// Settling time of the uncontrolled base y' = -g(y) from x0: +inf for
// Identity, the closed separable-ODE form for IdentityPlusRoot. LinearMatrix
// has no role for this quantity and is rejected.
double base_settling(const SystemSpec& spec, const Eigen::VectorXd& x0);

// Time for the base system's norm to decay from one level to another
// (from_norm > to_norm > 0); same base restrictions as base_settling.
double base_time_to_norm(const SystemSpec& spec, double from_norm, double to_norm);

// Solves A'P + PA = I through the n^2 Kronecker system. Requires -A Hurwitz;
// the error message names the offending eigenvalue otherwise. The residual
// is verified to 1e-10 and P to be symmetric positive definite.
Eigen::MatrixXd lyapunov_solve(const Eigen::MatrixXd& A);

// G^{-1}(T(x, t0)) with G(z) = T_c int_0^z Phi, by monotone root solve.
// Recovers V(x) when the equality case holds. Autonomous gains only.
double converse_lyapunov(const SystemSpec& spec, const Eigen::VectorXd& x);

}  // namespace fixtime
