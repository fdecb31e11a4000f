#pragma once

#include <cstddef>
#include <deque>

#include <Eigen/Dense>

#include "pwot/geometry.hpp"

namespace pwot {

struct PositionEntry {
  long frame = 0;
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const PositionEntry&, const PositionEntry&) = default;
};

/// FIFO of the last `capacity` accepted target positions.
class PositionHistory {
 public:
  explicit PositionHistory(std::size_t capacity = 10);

  /// Throws OrderingError unless entry.frame is greater than the newest frame.
  void push(const PositionEntry& entry);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::deque<PositionEntry>& entries() const { return entries_; }
  const PositionEntry& latest() const { return entries_.back(); }

  friend bool operator==(const PositionHistory&, const PositionHistory&) = default;

 private:
  std::size_t capacity_;
  std::deque<PositionEntry> entries_;
};

struct KalmanParams {
  double process_noise = 0.1;      // q, on the velocity terms
  double measurement_noise = 2.0;  // r, pixels
  double initial_covariance = 10.0;
};

/// Constant-velocity filter over (x, y, vx, vy), one frame per step.
class KalmanState {
 public:
  using Vector4 = Eigen::Vector4d;
  using Matrix4 = Eigen::Matrix4d;

  KalmanState() : KalmanState(0.0, 0.0) {}
  KalmanState(double x, double y, KalmanParams params = {});
  KalmanState(const Vector4& state, const Matrix4& covariance, KalmanParams params);

  const Vector4& state() const { return x_; }
  const Matrix4& covariance() const { return p_; }
  const KalmanParams& params() const { return params_; }
  double x() const { return x_(0); }
  double y() const { return x_(1); }

  /// Advances one frame and returns the predicted position.
  Eigen::Vector2d predict();
  /// Measurement update on (x, y).
  void update(const Eigen::Vector2d& z);

  friend bool operator==(const KalmanState& a, const KalmanState& b) {
    return a.x_ == b.x_ && a.p_ == b.p_ && a.params_.process_noise == b.params_.process_noise &&
           a.params_.measurement_noise == b.params_.measurement_noise;
  }

 private:
  Vector4 x_;
  Matrix4 p_;
  KalmanParams params_;
};

/// Same as KalmanState::predict but on a copy.
inline std::pair<Eigen::Vector2d, KalmanState> kalman_predict(KalmanState s) {
  const Eigen::Vector2d p = s.predict();
  return {p, s};
}

inline KalmanState kalman_update(KalmanState s, const Eigen::Vector2d& z) {
  s.update(z);
  return s;
}

/// A jump longer than `factor` SLW diagonals in one frame is implausible.
bool plausible_displacement(Point from, Point to, Shape slw, double factor = 3.0);

}  // namespace pwot
