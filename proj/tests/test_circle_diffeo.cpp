#include <doctest.h>

#include <cmath>
#include <vector>

#include "holocycle/circle_diffeo.hpp"
#include "test_util.hpp"

using namespace holocycle;
using testutil::kTwoPi;

TEST_CASE("rotations carry exact lifts and trivial higher jets") {
  auto r = CircleDiffeo::rotation(0.3125, 64, 3);
  CHECK(r.grid_size() == 64);
  CHECK(r.jet_order() == 3);
  for (double t : {0.0, 0.1, 0.77, 1.4}) {
    CHECK(r.lift(t) == doctest::Approx(t + 0.3125).epsilon(1e-14));
    CHECK(r.derivative(1, t) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r.derivative(2, t)) < 1e-10);
  }
  CHECK(r.circle_image(0.9) == doctest::Approx(0.2125).epsilon(1e-12));
}

TEST_CASE("degree one lift wraps by one per period") {
  testutil::Rng rng(3);
  auto h = testutil::random_diffeo(rng, 128, 2);
  for (double t : {0.11, 0.63}) {
    CHECK(h.lift(t + 1.0) == doctest::Approx(h.lift(t) + 1.0).epsilon(1e-10));
    CHECK(h.lift(t - 2.0) == doctest::Approx(h.lift(t) - 2.0).epsilon(1e-10));
  }
}

TEST_CASE("sampled lift recovers analytic derivatives spectrally") {
  const double a = 0.04, c = 0.21;
  auto h = CircleDiffeo::from_lift(
      [=](double t) { return t + c + a * std::sin(kTwoPi * t); }, 128, 3);
  for (double t : {0.05, 0.37, 0.81}) {
    CHECK(h.derivative(1, t) ==
          doctest::Approx(1.0 + a * kTwoPi * std::cos(kTwoPi * t)).epsilon(1e-8));
    CHECK(h.derivative(2, t) ==
          doctest::Approx(-a * kTwoPi * kTwoPi * std::sin(kTwoPi * t)).epsilon(1e-7));
  }
  CHECK(h.jet_source() == JetSource::spectral);
}

TEST_CASE("composition matches the analytic composite") {
  const double a1 = 0.03, a2 = 0.05, c1 = 0.4, c2 = 0.15;
  auto f1 = [=](double t) { return t + c1 + a1 * std::sin(kTwoPi * t); };
  auto f2 = [=](double t) { return t + c2 + a2 * std::cos(kTwoPi * t); };
  auto g = CircleDiffeo::from_lift(f1, 256, 3);
  auto h = CircleDiffeo::from_lift(f2, 256, 3);
  auto gh = compose(g, h);
  auto direct = CircleDiffeo::from_lift([&](double t) { return f1(f2(t)); }, 256, 3);
  CHECK(d0(gh, direct) < 1e-10);
  CHECK(dk_surrogate(gh, direct, 2) < 1e-5);
}

TEST_CASE("three map fusion agrees with two pairwise compositions") {
  testutil::Rng rng(17);
  for (int rep = 0; rep < 5; ++rep) {
    auto f = testutil::random_diffeo(rng, 128, 3);
    auto g = testutil::random_diffeo(rng, 128, 3);
    auto h = testutil::random_diffeo(rng, 128, 3);
    auto fused = CircleDiffeo::compose3(f, g, h);
    auto paired = compose(f, compose(g, h));
    CHECK(d0(fused, paired) < 1e-9);
  }
}

TEST_CASE("inverse composes back to the identity") {
  testutil::Rng rng(29);
  auto id = CircleDiffeo::identity(128, 3);
  for (int rep = 0; rep < 5; ++rep) {
    // grid 128 inversion of a generic spline map is good to a few 1e-7
    auto h = testutil::random_diffeo(rng, 128, 3);
    CHECK(d0(compose(h, h.inverse()), id) < 5e-7);
    CHECK(d0(compose(h.inverse(), h), id) < 5e-7);
  }
  auto r = CircleDiffeo::rotation(0.3, 64, 1);
  CHECK(d0(r.inverse(), CircleDiffeo::rotation(-0.3, 64, 1)) < 1e-12);
}

TEST_CASE("sup distance behaves like a metric and sees rotations exactly") {
  testutil::Rng rng(31);
  auto f = testutil::random_diffeo(rng, 128, 2);
  auto g = testutil::random_diffeo(rng, 128, 2);
  auto h = testutil::random_diffeo(rng, 128, 2);
  CHECK(d0(f, f) == 0.0);
  CHECK(d0(f, g) == doctest::Approx(d0(g, f)).epsilon(1e-14));
  CHECK(d0(f, h) <= d0(f, g) + d0(g, h) + 1e-12);
  CHECK(d0(CircleDiffeo::rotation(0.1, 64, 1), CircleDiffeo::rotation(0.35, 64, 1)) ==
        doctest::Approx(0.25).epsilon(1e-12));
  // circle distance wraps
  CHECK(d0(CircleDiffeo::rotation(0.05, 64, 1), CircleDiffeo::rotation(0.95, 64, 1)) ==
        doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("jet surrogate dominates the sup distance and grows with order") {
  testutil::Rng rng(41);
  auto f = testutil::random_diffeo(rng, 128, 3);
  auto g = testutil::random_diffeo(rng, 128, 3);
  double base = d0(f, g);
  double prev = base;
  for (int k = 1; k <= 3; ++k) {
    double dk = dk_surrogate(f, g, k);
    CHECK(dk >= prev - 1e-14);
    prev = dk;
  }
}

TEST_CASE("circle distance on representatives") {
  CHECK(circle_dist(0.1, 0.9) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(circle_dist(0.25, 0.75) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(circle_dist(1.2, 0.2) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(circle_dist(-0.1, 0.1) == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("value only view drops derivative data but keeps the map") {
  testutil::Rng rng(53);
  auto h = testutil::random_diffeo(rng, 128, 3);
  auto c0 = h.c0_only();
  CHECK(c0.jet_order() == 0);
  CHECK(d0(h, c0) < 1e-14);
}

TEST_CASE("jet norms report slope bounds") {
  auto r = CircleDiffeo::rotation(0.4, 64, 2);
  auto n = r.jet_norms(2);
  CHECK(n.min_slope == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(n.sup[0] == doctest::Approx(1.0).epsilon(1e-10));
  const double a = 0.1;
  auto h = CircleDiffeo::from_lift(
      [=](double t) { return t + a * std::sin(kTwoPi * t); }, 256, 2);
  auto nh = h.jet_norms(2);
  CHECK(nh.sup[0] == doctest::Approx(1.0 + a * kTwoPi).epsilon(1e-4));
  CHECK(nh.min_slope == doctest::Approx(1.0 - a * kTwoPi).epsilon(1e-4));
}

TEST_CASE("resampling preserves the map") {
  testutil::Rng rng(67);
  auto h = testutil::random_diffeo(rng, 128, 2);
  CHECK(d0(h.resampled(256), h) < 1e-8);
  CHECK(h.resampled(256).grid_size() == 256);
}

TEST_CASE("non monotone lifts are rejected") {
  CHECK_THROWS(CircleDiffeo::from_lift(
      [](double t) { return t + 0.5 * std::sin(kTwoPi * t); }, 128, 2));
}

TEST_CASE("round trip through raw samples") {
  testutil::Rng rng(71);
  auto h = testutil::random_diffeo(rng, 64, 2);
  auto back = CircleDiffeo::from_samples(h.lift_samples(), 2);
  CHECK(d0(h, back) < 1e-12);
}
