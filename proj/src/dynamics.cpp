#include "fixtime/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace fixtime {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

}  // namespace

const char* base_kind_name(BaseKind b) {
    switch (b) {
        case BaseKind::Identity: return "Identity";
        case BaseKind::IdentityPlusRoot: return "IdentityPlusRoot";
        case BaseKind::LinearMatrix: return "LinearMatrix";
    }
    return "?";
}

void finalize_system(SystemSpec& spec) {
    if (spec.dim < 1) throw ValidationError("SystemSpec: dim must be >= 1");
    if (!(spec.T_c > 0.0)) throw ValidationError("SystemSpec: T_c must be > 0");
    if (!(spec.t0 >= 0.0)) throw ValidationError("SystemSpec: t0 must be >= 0");
    if (spec.aut.has_value() == spec.nonaut.has_value()) {
        throw ValidationError("SystemSpec: exactly one of the gain variants must be set");
    }
    if (spec.nonaut &&
        std::abs(spec.nonaut->T_c - spec.T_c) > 1e-12 * spec.T_c) {
        throw ValidationError("SystemSpec: gain T_c disagrees with system T_c");
    }
    switch (spec.base) {
        case BaseKind::Identity:
            break;
        case BaseKind::IdentityPlusRoot:
            if (!(spec.root_a > 0.0 && spec.root_a < 1.0)) {
                std::ostringstream os;
                os << "SystemSpec: IdentityPlusRoot exponent a must lie in (0,1), got "
                   << spec.root_a;
                throw ValidationError(os.str());
            }
            break;
        case BaseKind::LinearMatrix: {
            if (spec.A.rows() != spec.dim || spec.A.cols() != spec.dim) {
                throw ValidationError("SystemSpec: A must be dim x dim");
            }
            spec.P = lyapunov_solve(spec.A);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(spec.P);
            spec.lambda_max_P = es.eigenvalues().maxCoeff();
            break;
        }
    }
}

// stableNorm throughout: states shrink through ~1e-162 on the way to tight
// settle radii, where squaring inside plain norm() underflows to exactly zero.
double lyapunov_V(const SystemSpec& spec, const Eigen::VectorXd& x) {
    if (spec.base == BaseKind::LinearMatrix) {
        const double m = x.cwiseAbs().maxCoeff();
        if (m == 0.0 || !std::isfinite(m)) return m;
        const Eigen::VectorXd y = x / m;
        return m * std::sqrt(y.dot(spec.P * y));
    }
    return x.stableNorm();
}

double base_H(const SystemSpec& spec, double V) {
    switch (spec.base) {
        case BaseKind::Identity: return V;
        case BaseKind::IdentityPlusRoot: return V + std::pow(V, spec.root_a);
        case BaseKind::LinearMatrix: return V / (2.0 * spec.lambda_max_P);
    }
    throw ValidationError("base_H: unknown base");
}

Eigen::VectorXd base_g(const SystemSpec& spec, const Eigen::VectorXd& x) {
    switch (spec.base) {
        case BaseKind::Identity: return x;
        case BaseKind::IdentityPlusRoot: {
            const double n = x.stableNorm();
            if (n == 0.0) return Eigen::VectorXd::Zero(x.size());
            return x + std::pow(n, spec.root_a - 1.0) * x;
        }
        case BaseKind::LinearMatrix: return spec.A * x;
    }
    throw ValidationError("base_g: unknown base");
}

double gain_at(const SystemSpec& spec, double V, double t, double gain_cap) {
    if (spec.aut) return psi_gain_aut(*spec.aut, V, base_H(spec, V), gain_cap);
    return gain_value_ex(*spec.nonaut, t - spec.t0, gain_cap).value;
}

Eigen::VectorXd field(const SystemSpec& spec, const Eigen::VectorXd& x, double t,
                      double gain_cap) {
    if (x.stableNorm() == 0.0) return Eigen::VectorXd::Zero(x.size());
    const double V = lyapunov_V(spec, x);
    const double psi = gain_at(spec, V, t, gain_cap);
    return (-psi / spec.T_c) * base_g(spec, x);
}

double base_settling(const SystemSpec& spec, const Eigen::VectorXd& x0) {
    const double n = x0.stableNorm();
    if (n == 0.0) return 0.0;
    switch (spec.base) {
        case BaseKind::Identity:
            return inf;
        case BaseKind::IdentityPlusRoot: {
            const double a = spec.root_a;
            return std::log1p(std::pow(n, 1.0 - a)) / (1.0 - a);
        }
        case BaseKind::LinearMatrix:
            throw ValidationError(
                "base_settling: LinearMatrix base has no separable settling form");
    }
    throw ValidationError("base_settling: unknown base");
}

double base_time_to_norm(const SystemSpec& spec, double from_norm, double to_norm) {
    if (!(from_norm > to_norm && to_norm > 0.0)) {
        throw ValidationError("base_time_to_norm: need from_norm > to_norm > 0");
    }
    switch (spec.base) {
        case BaseKind::Identity:
            return std::log(from_norm / to_norm);
        case BaseKind::IdentityPlusRoot: {
            const double a = spec.root_a;
            const double e = 1.0 - a;
            return (std::log1p(std::pow(from_norm, e)) - std::log1p(std::pow(to_norm, e))) / e;
        }
        case BaseKind::LinearMatrix:
            throw ValidationError(
                "base_time_to_norm: LinearMatrix base has no separable settling form");
    }
    throw ValidationError("base_time_to_norm: unknown base");
}

Eigen::MatrixXd lyapunov_solve(const Eigen::MatrixXd& A) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || n < 1) throw ValidationError("lyapunov_solve: A must be square");

    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    const auto eig = es.eigenvalues();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(eig[i].real() > 0.0)) {
            std::ostringstream os;
            os << "lyapunov_solve: -A is not Hurwitz; eigenvalue of A at approximately "
               << eig[i].real() << (eig[i].imag() < 0 ? " - " : " + ")
               << std::abs(eig[i].imag()) << "i has nonpositive real part";
            throw ValidationError(os.str());
        }
    }

    // vec(A'P) + vec(PA) = (I (x) A' + A' (x) I) vec(P) = vec(I)
    const Eigen::MatrixXd At = A.transpose();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n * n, n * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        M.block(j * n, j * n, n, n) += At;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index k = 0; k < n; ++k) {
                M(j * n + i, k * n + i) += At(j, k);
            }
        }
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n * n);
    for (Eigen::Index i = 0; i < n; ++i) rhs(i * n + i) = 1.0;

    const Eigen::VectorXd v = M.fullPivLu().solve(rhs);
    Eigen::MatrixXd P(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) P(i, j) = v(j * n + i);
    }
    P = 0.5 * (P + P.transpose()).eval();

    const double resid = (At * P + P * A - Eigen::MatrixXd::Identity(n, n)).norm();
    if (!(resid <= 1e-10)) {
        std::ostringstream os;
        os << "lyapunov_solve: residual " << resid << " exceeds 1e-10";
        throw NumericalError(os.str());
    }
    Eigen::LLT<Eigen::MatrixXd> llt(P);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("lyapunov_solve: P is not positive definite");
    }
    return P;
}

double converse_lyapunov(const SystemSpec& spec, const Eigen::VectorXd& x) {
    if (!spec.aut) {
        throw ValidationError("converse_lyapunov: autonomous gain required");
    }
    const double V = lyapunov_V(spec, x);
    if (V == 0.0) return 0.0;
    const double T_val = predict_settling_aut(*spec.aut, V, spec.T_c);

    double hi = 1.0;
    int doublings = 0;
    while (predict_settling_aut(*spec.aut, hi, spec.T_c) <= T_val) {
        hi *= 2.0;
        if (++doublings > 80) {
            throw NumericalError("converse_lyapunov: could not bracket G^{-1}");
        }
    }
    auto f = [&](double z) {
        return predict_settling_aut(*spec.aut, z, spec.T_c) - T_val;
    };
    auto df = [&](double z) { return spec.T_c * phi(*spec.aut, z); };
    return root_bracketed(f, df, 0.0, hi, 1e-10).root;
}

}  // namespace fixtime
