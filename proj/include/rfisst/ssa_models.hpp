#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "rfisst/common.hpp"
#include "rfisst/gaussian_track.hpp"
#include "rfisst/mtt_core.hpp"

namespace rfisst {

inline constexpr double kEarthMuKm3S2 = 398600.4418;
inline constexpr double kEarthRadiusKm = 6378.0;

namespace detail {
inline Vec4 two_body_deriv(const Vec4& s, double mu) {
    const double r2 = s(0) * s(0) + s(1) * s(1);
    const double r3 = r2 * std::sqrt(r2);
    Vec4 d;
    d << s(2), s(3), -mu * s(0) / r3, -mu * s(1) / r3;
    return d;
}
}  // namespace detail

/// RK4 integration of planar two-body motion, substeps capped at 10 s.
/// Throws if the trajectory reaches Earth's surface.
inline Vec4 propagate_two_body(const Vec4& state, double dt, double mu = kEarthMuKm3S2) {
    if (state.head<2>().norm() <= 0.0) throw TrackingError("two-body state at singularity");
    if (dt == 0.0) return state;
    const int substeps = std::max(1, static_cast<int>(std::ceil(std::abs(dt) / 10.0)));
    const double h = dt / substeps;
    Vec4 s = state;
    for (int i = 0; i < substeps; ++i) {
        const Vec4 k1 = detail::two_body_deriv(s, mu);
        const Vec4 k2 = detail::two_body_deriv(s + 0.5 * h * k1, mu);
        const Vec4 k3 = detail::two_body_deriv(s + 0.5 * h * k2, mu);
        const Vec4 k4 = detail::two_body_deriv(s + h * k3, mu);
        s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (s.head<2>().norm() < kEarthRadiusKm) {
            throw TrackingError("two-body propagation impacted Earth");
        }
    }
    return s;
}

/// Discrete white-acceleration process noise for one interval of dt seconds.
inline Mat4 white_accel_process_noise(double accel_std, double dt) {
    const double q = accel_std * accel_std;
    const double p = dt * dt / 2.0;
    Mat4 Q = Mat4::Zero();
    // per-axis [pos, vel] block from G = [dt^2/2, dt]'
    Q(0, 0) = q * p * p;
    Q(0, 2) = q * p * dt;
    Q(2, 0) = q * p * dt;
    Q(2, 2) = q * dt * dt;
    Q(1, 1) = q * p * p;
    Q(1, 3) = q * p * dt;
    Q(3, 1) = q * p * dt;
    Q(3, 3) = q * dt * dt;
    return Q;
}

/// Two-body dynamics with the flow Jacobian taken by central finite
/// differences of the propagated state (step 1e-6 relative per component).
inline DynamicsModel two_body_dynamics(double mu = kEarthMuKm3S2, double accel_noise_std = 0.0) {
    DynamicsModel dyn;
    dyn.propagate = [mu](const Vec4& x, double dt) { return propagate_two_body(x, dt, mu); };
    dyn.jacobian = [mu](const Vec4& x, double dt) {
        Mat4 F;
        for (int i = 0; i < 4; ++i) {
            // velocity components can pass through zero; keep a floor on the step
            const double scale = std::max(std::abs(x(i)), i < 2 ? 1.0 : 1e-3);
            const double eps = 1e-6 * scale;
            Vec4 xp = x, xm = x;
            xp(i) += eps;
            xm(i) -= eps;
            F.col(i) = (propagate_two_body(xp, dt, mu) - propagate_two_body(xm, dt, mu)) /
                       (2.0 * eps);
        }
        return F;
    };
    dyn.process_noise = [accel_noise_std](double dt) {
        return white_accel_process_noise(accel_noise_std, dt);
    };
    return dyn;
}

/// Angular-FOV position sensor with clutter. The observable region is the
/// wedge-annulus between range_min and range_max.
struct Sensor {
    Vec2 position = Vec2::Zero();
    double look_direction = 15.0 * M_PI / 180.0;
    double fov_half_angle = 15.0 * M_PI / 180.0;
    double range_min = 6500.0;
    double range_max = 30000.0;
    Mat2 R = Mat2::Identity();
    double pD = 0.9;
    double clutter_rate = 0.0;

    void validate() const {
        if (!(fov_half_angle > 0.0 && fov_half_angle < M_PI)) {
            throw ConfigError("fov_half_angle out of (0, pi)");
        }
        if (pD < 0.0 || pD > 1.0) throw ConfigError("pD out of [0, 1]");
        if (clutter_rate < 0.0) throw ConfigError("clutter_rate negative");
        if (!(range_min > 0.0 && range_max > range_min)) throw ConfigError("bad range bounds");
    }
};

/// True iff the bearing from the sensor lies within the FOV wedge,
/// boundary inclusive (small tolerance for the exact-edge case).
inline bool in_fov(const Vec2& position, const Sensor& s) {
    const Vec2 rel = position - s.position;
    const double bearing = std::atan2(rel(1), rel(0));
    return std::abs(wrap_angle(bearing - s.look_direction)) <= s.fov_half_angle + 1e-12;
}

/// Area of the observable wedge-annulus (km^2).
inline double fov_area(const Sensor& s) {
    return s.fov_half_angle * (s.range_max * s.range_max - s.range_min * s.range_min);
}

/// Uniform clutter density over the observable region: log(1/A) inside,
/// -inf outside.
inline double clutter_logdensity(const Vec2& z, const Sensor& s) {
    const double range = (z - s.position).norm();
    if (range < s.range_min || range > s.range_max || !in_fov(z, s)) return kNegInf;
    return -std::log(fov_area(s));
}

/// Draw a point uniformly over the wedge-annulus.
template <class Urbg>
Vec2 sample_fov_point(const Sensor& s, Urbg& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double theta = s.look_direction + (2.0 * u01(rng) - 1.0) * s.fov_half_angle;
    const double r2min = s.range_min * s.range_min;
    const double r2max = s.range_max * s.range_max;
    const double r = std::sqrt(r2min + u01(rng) * (r2max - r2min));
    return s.position + r * Vec2(std::cos(theta), std::sin(theta));
}

/// Detect each in-FOV truth with probability pD (position + Gaussian noise),
/// add Poisson clutter uniform over the observable region, shuffle.
template <class Urbg>
std::vector<Vec2> observe(const std::vector<Vec4>& truth_states, const Sensor& s, Urbg& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> n01(0.0, 1.0);
    const Eigen::LLT<Mat2> llt(s.R);
    std::vector<Vec2> out;
    for (const Vec4& x : truth_states) {
        const Vec2 pos(x(0), x(1));
        const double range = (pos - s.position).norm();
        if (!in_fov(pos, s) || range < s.range_min || range > s.range_max) continue;
        if (u01(rng) > s.pD) continue;
        const Vec2 noise(n01(rng), n01(rng));
        out.push_back(pos + llt.matrixL() * noise);
    }
    std::poisson_distribution<int> pois(s.clutter_rate);
    const int clutter_count = s.clutter_rate > 0.0 ? pois(rng) : 0;
    for (int i = 0; i < clutter_count; ++i) out.push_back(sample_fov_point(s, rng));
    std::shuffle(out.begin(), out.end(), rng);
    return out;
}

/// One angular slice of the FOV with the Gaussian moment-match of a uniform
/// distribution over its wedge-annulus; the birth pdf p_b for that slice.
struct BirthPartition {
    int index = 0;
    double theta_min = 0.0;
    double theta_max = 0.0;
    double range_min = 0.0;
    double range_max = 0.0;
    Vec4 mean = Vec4::Zero();
    Mat4 covariance = Mat4::Identity();
};

/// Split the FOV into equal angular wedges. Position moments are the exact
/// moments of the uniform distribution over each wedge-annulus; velocity is
/// an independent zero-mean prior with the given standard deviation.
inline std::vector<BirthPartition> birth_partitions(const Sensor& s, int count,
                                                    double velocity_std) {
    if (count < 1) throw ConfigError("birth partition count must be >= 1");
    std::vector<BirthPartition> out;
    const double width = 2.0 * s.fov_half_angle / count;
    const double r1 = s.range_min, r2 = s.range_max;
    const double area_angular = 0.5 * width * (r2 * r2 - r1 * r1);
    for (int l = 0; l < count; ++l) {
        BirthPartition p;
        p.index = l;
        p.theta_min = s.look_direction - s.fov_half_angle + l * width;
        p.theta_max = p.theta_min + width;
        p.range_min = r1;
        p.range_max = r2;

        const double c_int = std::sin(p.theta_max) - std::sin(p.theta_min);
        const double s_int = -std::cos(p.theta_max) + std::cos(p.theta_min);
        const double r3 = (r2 * r2 * r2 - r1 * r1 * r1) / 3.0;
        const double r4 = (r2 * r2 * r2 * r2 - r1 * r1 * r1 * r1) / 4.0;
        const double ex = c_int * r3 / area_angular;
        const double ey = s_int * r3 / area_angular;
        auto trig2 = [](double a, double b, bool cos2) {
            // integral of cos^2 (or sin^2) over [a, b]
            const double lin = 0.5 * (b - a);
            const double osc = 0.25 * (std::sin(2.0 * b) - std::sin(2.0 * a));
            return cos2 ? lin + osc : lin - osc;
        };
        const double exx = trig2(p.theta_min, p.theta_max, true) * r4 / area_angular;
        const double eyy = trig2(p.theta_min, p.theta_max, false) * r4 / area_angular;
        const double cs_int =
            0.5 * (std::sin(p.theta_max) * std::sin(p.theta_max) -
                   std::sin(p.theta_min) * std::sin(p.theta_min));
        const double exy = cs_int * r4 / area_angular;

        p.mean = Vec4::Zero();
        p.mean(0) = s.position(0) + ex;
        p.mean(1) = s.position(1) + ey;
        Mat4 cov = Mat4::Zero();
        cov(0, 0) = exx - ex * ex;
        cov(1, 1) = eyy - ey * ey;
        cov(0, 1) = cov(1, 0) = exy - ex * ey;
        cov(2, 2) = cov(3, 3) = velocity_std * velocity_std;
        p.covariance = clamp_psd<4>(cov);
        out.push_back(p);
    }
    return out;
}

}  // namespace rfisst
