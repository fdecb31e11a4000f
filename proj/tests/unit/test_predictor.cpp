#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "pwot/errors.hpp"
#include "pwot/predictor.hpp"
#include "pwot/rng.hpp"
#include "support/oracles.hpp"

using namespace pwot;

namespace {

void check_psd(const KalmanState& s) {
  const auto& p = s.covariance();
  CHECK((p - p.transpose()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(p);
  CHECK(es.eigenvalues().minCoeff() >= -1e-9);
}

}  // namespace

TEST_CASE("history is a bounded FIFO") {
  PositionHistory h(5);
  for (long i = 1; i <= 7; ++i) h.push({i, double(i), 0.0});
  REQUIRE(h.size() == 5);
  for (long i = 0; i < 5; ++i) CHECK(h.entries()[i].frame == i + 3);

  PositionHistory one(1);
  one.push({0, 1, 1});
  CHECK(one.size() == 1);
  one.push({4, 2, 2});
  CHECK(one.size() == 1);
  CHECK(one.latest().frame == 4);

  PositionHistory fresh;
  fresh.push({0, 0, 0});
  CHECK(fresh.size() == 1);
  CHECK(fresh.capacity() == 10);
  CHECK_THROWS_AS(fresh.push({0, 1, 1}), OrderingError);
  CHECK_THROWS_AS(PositionHistory(0), ConfigError);
}

TEST_CASE("constant-velocity transition") {
  KalmanState still(10, 20);
  const auto p = still.predict();
  CHECK(p.x() == 10);
  CHECK(p.y() == 20);

  KalmanState::Vector4 x(10, 20, 2, -1);
  KalmanState moving(x, KalmanState::Matrix4::Identity(), {});
  const auto [pred, next] = kalman_predict(moving);
  CHECK(pred.x() == doctest::Approx(12));
  CHECK(pred.y() == doctest::Approx(19));
  CHECK(moving.x() == 10);  // the copy-returning form leaves the input alone
  CHECK(next.x() == doctest::Approx(12));
}

TEST_CASE("matches a scalar per-axis filter") {
  Rng rng(88);
  const KalmanParams params{0.3, 1.5, 7.0};
  KalmanState kf(5, -3, params);
  oracle::AxisKalman ax(5, 0.3, 1.5, 7.0), ay(-3, 0.3, 1.5, 7.0);
  for (int t = 1; t <= 40; ++t) {
    const auto p = kf.predict();
    CHECK(p.x() == doctest::Approx(ax.predict()).epsilon(1e-9));
    CHECK(p.y() == doctest::Approx(ay.predict()).epsilon(1e-9));
    const double zx = 5 + 1.7 * t + rng.normal(0, 1), zy = -3 - 0.4 * t + rng.normal(0, 1);
    kf.update({zx, zy});
    ax.update(zx);
    ay.update(zy);
    CHECK(kf.state()(2) == doctest::Approx(ax.v).epsilon(1e-9));
    CHECK(kf.state()(3) == doctest::Approx(ay.v).epsilon(1e-9));
    check_psd(kf);
  }
}

TEST_CASE("noiseless track converges") {
  KalmanState kf(0, 0);
  const double vx = 2.0, vy = -1.0;
  double err = 0;
  for (int t = 1; t <= 15; ++t) {
    const auto p = kf.predict();
    err = std::hypot(p.x() - vx * t, p.y() - vy * t);
    kf.update({vx * t, vy * t});
    if (t == 11) CHECK(err < 0.5);  // after 10 updates
  }
  CHECK(std::abs(kf.state()(2) - vx) <= 0.05 * std::abs(vx));
  CHECK(std::abs(kf.state()(3) - vy) <= 0.05 * std::abs(vy));
  CHECK(err < 0.5);
}

TEST_CASE("measurement noise limits") {
  KalmanState precise(0, 0, {0.1, 1e-9, 10});
  precise.predict();
  precise.update({7, -4});
  CHECK(precise.x() == doctest::Approx(7).epsilon(1e-6));
  CHECK(precise.y() == doctest::Approx(-4).epsilon(1e-6));

  KalmanState vague(3, 3, {0.1, 1e12, 10});
  vague.predict();
  vague.update({500, -500});
  CHECK(vague.x() == doctest::Approx(3).epsilon(1e-6));
  CHECK(vague.y() == doctest::Approx(3).epsilon(1e-6));
}

TEST_CASE("residuals shrink with zero process noise") {
  KalmanState kf(0, 0, {0.0, 2.0, 10.0});
  double prev = 1e9;
  for (int t = 1; t <= 40; ++t) {
    const auto p = kf.predict();
    const double res = std::hypot(p.x() - 3.0 * t, p.y() - 1.0 * t);
    if (t > 5) {
      CHECK(res <= prev + 1e-12);
    }
    prev = res;
    kf.update({3.0 * t, 1.0 * t});
  }
}

TEST_CASE("updating with the prediction keeps the position") {
  KalmanState::Vector4 x(4, 9, 1.5, 0.5);
  KalmanState kf(x, KalmanState::Matrix4::Identity() * 3, {});
  const auto p = kf.predict();
  kf.update(p);
  CHECK(kf.x() == doctest::Approx(p.x()));
  CHECK(kf.y() == doctest::Approx(p.y()));
  check_psd(kf);
}

TEST_CASE("plausible displacement") {
  const Shape slw{30, 40};  // diagonal 50
  CHECK(plausible_displacement({0, 0}, {90, 120}, slw));   // exactly 150
  CHECK_FALSE(plausible_displacement({0, 0}, {91, 120}, slw));
  CHECK(plausible_displacement({0, 0}, {30, 40}, slw, 1.0));
}
