#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rfisst {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Mat24 = Eigen::Matrix<double, 2, 4>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Numerical failure inside the filter (diverged propagation, singular
/// innovation covariance, indefinite covariance).
class TrackingError : public std::runtime_error {
public:
    explicit TrackingError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration (rates, probabilities, scenario files).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// All hypothesis weights collapsed to -inf; caller decides the fallback.
class DegenerateForestError : public std::runtime_error {
public:
    DegenerateForestError() : std::runtime_error("degenerate forest: all weights -inf") {}
};

/// Exhaustive enumeration would exceed the configured association cap.
class EnumerationCapError : public std::runtime_error {
public:
    explicit EnumerationCapError(const std::string& what) : std::runtime_error(what) {}
};

/// Symmetrize and clamp a covariance to PSD. Eigenvalues in
/// [-1e-9*trace, 0) are clamped to zero; anything lower throws.
template <int N>
Eigen::Matrix<double, N, N> clamp_psd(const Eigen::Matrix<double, N, N>& cov) {
    Eigen::Matrix<double, N, N> sym = 0.5 * (cov + cov.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, N, N>> eig(sym);
    const double tol = 1e-9 * std::max(sym.trace(), 0.0);
    double min_eig = eig.eigenvalues().minCoeff();
    if (min_eig >= 0.0) return sym;
    if (min_eig < -tol - 1e-300) {
        throw TrackingError("covariance not PSD: min eigenvalue " + std::to_string(min_eig));
    }
    Eigen::Matrix<double, N, 1> vals = eig.eigenvalues().cwiseMax(0.0);
    sym = eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
    return 0.5 * (sym + sym.transpose());
}

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a > M_PI) a -= 2.0 * M_PI;
    if (a <= -M_PI) a += 2.0 * M_PI;
    return a;
}

}  // namespace rfisst
