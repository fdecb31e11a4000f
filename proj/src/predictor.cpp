#include "pwot/predictor.hpp"

#include <cmath>
#include <string>

#include "pwot/errors.hpp"

namespace pwot {

PositionHistory::PositionHistory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("position history capacity must be >= 1");
}

void PositionHistory::push(const PositionEntry& entry) {
  if (!entries_.empty() && entry.frame <= entries_.back().frame) {
    throw OrderingError("frame index " + std::to_string(entry.frame) +
                        " not after latest history frame " +
                        std::to_string(entries_.back().frame));
  }
  entries_.push_back(entry);
  while (entries_.size() > capacity_) entries_.pop_front();
}

KalmanState::KalmanState(double x, double y, KalmanParams params)
    : x_(x, y, 0.0, 0.0),
      p_(Matrix4::Identity() * params.initial_covariance),
      params_(params) {}

KalmanState::KalmanState(const Vector4& state, const Matrix4& covariance, KalmanParams params)
    : x_(state), p_(covariance), params_(params) {}

Eigen::Vector2d KalmanState::predict() {
  Matrix4 f = Matrix4::Identity();
  f(0, 2) = 1.0;
  f(1, 3) = 1.0;
  Matrix4 q = Matrix4::Zero();
  q(2, 2) = params_.process_noise;
  q(3, 3) = params_.process_noise;
  x_ = f * x_;
  p_ = f * p_ * f.transpose() + q;
  p_ = 0.5 * (p_ + p_.transpose());
  return x_.head<2>();
}

void KalmanState::update(const Eigen::Vector2d& z) {
  Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  const Eigen::Matrix2d r = Eigen::Matrix2d::Identity() * params_.measurement_noise;
  const Eigen::Matrix2d s = h * p_ * h.transpose() + r;
  const Eigen::Matrix<double, 4, 2> k = p_ * h.transpose() * s.inverse();
  x_ += k * (z - h * x_);
  // Joseph form keeps P positive semidefinite under round-off.
  const Matrix4 i_kh = Matrix4::Identity() - k * h;
  p_ = i_kh * p_ * i_kh.transpose() + k * r * k.transpose();
  p_ = 0.5 * (p_ + p_.transpose());
}

bool plausible_displacement(Point from, Point to, Shape slw, double factor) {
  const double diag = std::hypot(slw.width, slw.height);
  return std::hypot(to.x - from.x, to.y - from.y) <= factor * diag;
}

}  // namespace pwot
