#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fixtime/dynamics.hpp"
#include "fixtime/numerics.hpp"

namespace fixtime {

// Settling-time sweep over a family of initial norms along e1.
struct SweepReport {
    std::vector<double> x0_norms;
    std::vector<double> predicted;
    std::vector<double> observed;
    double sup_observed = 0.0;
    bool monotone_ok = true;
    double sup_gap = 0.0;  // T_c - sup_observed
};

struct LyapunovCheck {
    double max_violation = 0.0;      // sup over samples of dV/dt + (1/T_c) Psi H
    double equality_residual = 0.0;  // sup of |dV/dt + (1/T_c) Psi H|
    double gain_scale = 1.0;         // max gain seen along the trajectory
    std::size_t samples = 0;
};

SettlingReport certify_settling(const SystemSpec& spec, const Eigen::VectorXd& x0,
                                const IntegratorConfig& cfg);

SweepReport least_ubst_sweep(const SystemSpec& spec, const std::vector<double>& norms,
                             const IntegratorConfig& cfg);

LyapunovCheck lyapunov_check(const SystemSpec& spec, const Trajectory& traj);

}  // namespace fixtime
