#pragma once

#include <functional>

#include "rfisst/common.hpp"
#include "rfisst/mtt_core.hpp"

namespace rfisst {

/// Single-object motion model: nonlinear flow over dt seconds, its 4x4
/// linearization at a state, and the discrete process noise for dt.
struct DynamicsModel {
    std::function<Vec4(const Vec4&, double)> propagate;
    std::function<Mat4(const Vec4&, double)> jacobian;
    std::function<Mat4(double)> process_noise;
};

/// Position-extracting sensor model: h(x), its linearization H, and the
/// measurement noise R (km^2).
struct MeasurementModel {
    std::function<Vec2(const Vec4&)> h;
    Mat24 H = Mat24::Zero();
    Mat2 R = Mat2::Identity();
};

/// Sensor that reads planar position directly.
inline MeasurementModel position_measurement(const Mat2& R) {
    MeasurementModel m;
    m.h = [](const Vec4& x) { return Vec2(x(0), x(1)); };
    m.H << 1, 0, 0, 0,
           0, 1, 0, 0;
    m.R = R;
    return m;
}

/// log N(innovation; 0, S) given the Cholesky factor of S.
template <int M>
double innovation_loglik(const Eigen::Matrix<double, M, 1>& innovation,
                         const Eigen::LLT<Eigen::Matrix<double, M, M>>& llt) {
    double log_det_s = 0.0;
    for (int i = 0; i < M; ++i) log_det_s += 2.0 * std::log(llt.matrixL()(i, i));
    const double maha = innovation.dot(llt.solve(innovation));
    return -0.5 * (M * std::log(2.0 * M_PI) + log_det_s + maha);
}

template <int N, int M>
struct KalmanUpdateResult {
    Eigen::Matrix<double, N, 1> mean;
    Eigen::Matrix<double, N, N> covariance;
    double log_likelihood;  // log N(z; pred_meas, S)
};

/// Measurement update on a Gaussian belief, dimension-generic so the scalar
/// algebra can be checked directly. Returns the posterior and the log of the
/// Gaussian marginal likelihood with innovation covariance S = H P H' + R.
template <int N, int M>
KalmanUpdateResult<N, M> kalman_update(const Eigen::Matrix<double, N, 1>& mean,
                                       const Eigen::Matrix<double, N, N>& cov,
                                       const Eigen::Matrix<double, M, 1>& z,
                                       const Eigen::Matrix<double, M, 1>& predicted_meas,
                                       const Eigen::Matrix<double, M, N>& H,
                                       const Eigen::Matrix<double, M, M>& R) {
    const Eigen::Matrix<double, M, M> S = H * cov * H.transpose() + R;
    Eigen::LLT<Eigen::Matrix<double, M, M>> llt(S);
    if (llt.info() != Eigen::Success) {
        throw TrackingError("singular innovation covariance");
    }
    const Eigen::Matrix<double, M, 1> innovation = z - predicted_meas;

    const Eigen::Matrix<double, N, M> K = cov * H.transpose() * llt.solve(
        Eigen::Matrix<double, M, M>::Identity());
    KalmanUpdateResult<N, M> out;
    out.mean = mean + K * innovation;
    // Joseph form keeps the posterior covariance symmetric PSD.
    const Eigen::Matrix<double, N, N> IKH =
        Eigen::Matrix<double, N, N>::Identity() - K * H;
    out.covariance = clamp_psd<N>(IKH * cov * IKH.transpose() + K * R * K.transpose());
    out.log_likelihood = innovation_loglik<M>(innovation, llt);
    return out;
}

/// Propagate a track through the dynamics: mean by the nonlinear flow,
/// covariance by F P F' + Q with F the flow Jacobian at the prior mean.
inline Track predict_track(const Track& t, const DynamicsModel& dyn, double dt) {
    Track out = t;
    out.mean = dyn.propagate(t.mean, dt);
    if (!out.mean.allFinite()) throw TrackingError("propagation diverged");
    const Mat4 F = dyn.jacobian(t.mean, dt);
    out.covariance = clamp_psd<4>(F * t.covariance * F.transpose() + dyn.process_noise(dt));
    return out;
}

/// Kalman update of a track with one position measurement. The returned
/// log-likelihood is the exact Gaussian marginal log N(z; h(mean), S), the
/// closed form of the integral of p(z|x) against the predicted prior.
inline std::pair<Track, double> update_track(const Track& t, const Vec2& z,
                                             const MeasurementModel& meas) {
    auto r = kalman_update<4, 2>(t.mean, t.covariance, z, meas.h(t.mean), meas.H, meas.R);
    Track out = t;
    out.mean = r.mean;
    out.covariance = r.covariance;
    return {out, r.log_likelihood};
}

/// Marginal measurement log-likelihood of z under a track's predicted prior.
/// Bit-identical to the likelihood returned by update_track.
inline double measurement_loglik(const Track& t, const Vec2& z, const MeasurementModel& meas) {
    const Mat2 S = meas.H * t.covariance * meas.H.transpose() + meas.R;
    Eigen::LLT<Mat2> llt(S);
    if (llt.info() != Eigen::Success) {
        throw TrackingError("singular innovation covariance");
    }
    const Vec2 innovation = z - meas.h(t.mean);
    return innovation_loglik<2>(innovation, llt);
}

/// Squared Mahalanobis innovation distance, used by the optional gate.
inline double innovation_dist2(const Track& t, const Vec2& z, const MeasurementModel& meas) {
    const Mat2 S = meas.H * t.covariance * meas.H.transpose() + meas.R;
    Eigen::LLT<Mat2> llt(S);
    if (llt.info() != Eigen::Success) {
        throw TrackingError("singular innovation covariance");
    }
    const Vec2 innovation = z - meas.h(t.mean);
    return innovation.dot(llt.solve(innovation));
}

}  // namespace rfisst
