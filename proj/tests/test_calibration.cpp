#include <doctest.h>

#include <cmath>
#include <numbers>

#include "actlab/calibration.hpp"
#include "actlab/errors.hpp"

using namespace actlab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("action difference") {
  const SlitGeometry g{1, 1, 100};
  CHECK(action_difference(1, {1, 1, 10, 10}) == doctest::Approx(0.1));
  CHECK(action_difference(0, g) == 0.0);
  CHECK(action_difference(3.0, g) == 3 * action_difference(1.0, g));
  CHECK_THROWS_AS(action_difference(1, {1, 1, 10}), InvalidArgument);  // D/d = 10 < 100
  CHECK_THROWS_AS(action_difference(1, {-1, 1, 1000}), InvalidArgument);
}

TEST_CASE("fringe spacing") {
  const SlitGeometry g{1, 1, 10};
  CHECK(fringe_spacing(g, 1) == doctest::Approx(20 * kPi).epsilon(1e-15));
  CHECK(fringe_spacing({2, 1, 10}, 1) == doctest::Approx(10 * kPi).epsilon(1e-15));
  const double hbar = 0.37;
  CHECK(fringe_spacing({1.3, 0.2, 40}, 1 / hbar) ==
        doctest::Approx(2 * kPi * hbar * 40 / (1.3 * 0.2)).epsilon(1e-14));
  CHECK_THROWS_AS(fringe_spacing(g, 0), InvalidArgument);
  CHECK_THROWS_AS(fringe_spacing(g, -1), InvalidArgument);
}

TEST_CASE("constructive interference has eta dA = 2 pi n") {
  const SlitGeometry g{1.7, 0.3, 90};
  const double eta = 2.2;
  for (int n = -3; n <= 3; ++n) {
    const double y = interference_maximum(g, eta, n);
    CHECK(eta * action_difference(y, g) == doctest::Approx(2 * kPi * n).epsilon(1e-13));
  }
}

TEST_CASE("eta inference") {
  const std::vector<SlitGeometry> geoms{{1, 1, 100}, {2, 0.5, 80}, {0.3, 2, 500}, {5, 0.1, 20}, {1.7, 0.7, 90}};
  for (double eta : {1.0, 3.7, 9.48e33}) {
    std::vector<FringeMeasurement> ms;
    for (const auto& g : geoms) ms.push_back({g.p, g.d, g.D, fringe_spacing(g, eta)});
    const auto e = infer_eta(ms);
    CHECK(std::abs(e.eta - eta) < 1e-12 * eta);
    CHECK(e.spread < 1e-12);
    CHECK(e.universal);
    CHECK(e.per_measurement.size() == 5);
  }
  const auto single = infer_eta({{1, 1, 10, 20 * kPi}});
  CHECK(single.spread == 0.0);
  CHECK(single.eta == doctest::Approx(1));

  std::vector<FringeMeasurement> bad;
  for (const auto& g : geoms) bad.push_back({g.p, g.d, g.D, fringe_spacing(g, 1)});
  bad[2].dy *= 2;
  const auto e = infer_eta(bad);
  CHECK(e.spread == doctest::Approx(1).epsilon(1e-12));
  CHECK_FALSE(e.universal);
  nlohmann::json j = e;
  CHECK(j["hbar"].get<double>() == doctest::Approx(1 / e.eta));

  CHECK_THROWS_AS(infer_eta({}), InvalidArgument);
  CHECK_THROWS_AS(infer_eta({{1, 1, 10, 0}}), InvalidArgument);
}

TEST_CASE("de broglie") {
  CHECK(de_broglie(1, 1) == doctest::Approx(2 * kPi));
  const double eta = 4.1, p = 0.9;
  CHECK(std::abs(de_broglie(p, eta) * p * eta - 2 * kPi) < 1e-15 * 2 * kPi * 2);
  CHECK(de_broglie(p, eta) == doctest::Approx((2 * kPi / eta) / p).epsilon(1e-15));
  CHECK_THROWS_AS(de_broglie(0, 1), InvalidArgument);
  CHECK_THROWS_AS(de_broglie(1, 0), InvalidArgument);
}
