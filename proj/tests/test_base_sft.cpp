#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "holocycle/base_system.hpp"
#include "holocycle/errors.hpp"

using namespace holocycle;

namespace {

BaseSystem full2() { return BaseSystem::sft({{1, 1}, {1, 1}}, 0.5); }
BaseSystem ring3() { return BaseSystem::sft({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, 0.5); }

// trace of the n-th power of a small 0/1 transition matrix
long long trace_power(const std::vector<std::vector<int>>& T, int n) {
  const std::size_t m = T.size();
  std::vector<std::vector<long long>> P(m, std::vector<long long>(m, 0)),
      M(m, std::vector<long long>(m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    P[i][i] = 1;
    for (std::size_t j = 0; j < m; ++j) M[i][j] = T[i][j];
  }
  for (int k = 0; k < n; ++k) {
    std::vector<std::vector<long long>> R(m, std::vector<long long>(m, 0));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t l = 0; l < m; ++l)
        for (std::size_t j = 0; j < m; ++j) R[i][j] += P[i][l] * M[l][j];
    P = R;
  }
  long long t = 0;
  for (std::size_t i = 0; i < m; ++i) t += P[i][i];
  return t;
}

}  // namespace

TEST_CASE("periodic word counts match the transition matrix trace") {
  BaseSystem a = full2(), b = ring3();
  const std::vector<std::vector<int>> Ta{{1, 1}, {1, 1}};
  const std::vector<std::vector<int>> Tb{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  for (int n = 1; n <= 5; ++n) {
    CHECK(static_cast<long long>(a.periodic_points(n).size()) == trace_power(Ta, n));
    CHECK(static_cast<long long>(b.periodic_points(n).size()) == trace_power(Tb, n));
  }
  CHECK(b.periodic_points(1).empty());  // zero diagonal: no fixed words
  for (const auto& p : b.periodic_points(2)) CHECK(b.same_point(b.apply(p, 2), p, 0.0));
}

TEST_CASE("word metric contracts with the agreement radius") {
  BaseSystem sys = full2();
  SymbolPoint x = SymbolPoint::periodic({0, 1});
  CHECK(sys.dist(x, x) == 0.0);
  double prev = 1e9;
  for (int r = 1; r <= 6; ++r) {
    // agree with x on symbols [-r, r), deviate outside via an all-zero tail
    Word core_f, core_p;
    for (int i = 0; i < r; ++i) core_f.push_back(x.symbol(i));
    for (int i = 0; i < r; ++i) core_p.push_back(x.symbol(-r + i));
    SymbolPoint y = SymbolPoint::spliced({1, 1}, core_p, core_f, {1, 1});
    double d = sys.dist(x, y);
    CHECK(d > 0.0);
    CHECK(d < prev);
    CHECK(sys.dist(x, y) == doctest::Approx(sys.dist(y, x)).epsilon(1e-15));
    prev = d;
  }
}

TEST_CASE("inadmissible splices are rejected") {
  BaseSystem sys = ring3();
  CHECK_THROWS_AS(sys.validated(SymbolPoint::periodic({0, 0, 1})), InadmissibleSplice);
  CHECK_THROWS_AS(sys.validated(SymbolPoint::periodic({2, 2})), InadmissibleSplice);
  CHECK_NOTHROW(sys.validated(SymbolPoint::periodic({0, 1, 2})));
}

TEST_CASE("charts separate words and stay in the unit square") {
  BaseSystem sys = full2();
  std::vector<BasePoint> pts;
  for (long i = 0; i < 12; ++i) pts.push_back(sys.sample_point(i));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Vec2 uv = sys.chart(pts[i]);
    CHECK(uv.x >= 0.0);
    CHECK(uv.x < 1.0);
    CHECK(uv.y >= 0.0);
    CHECK(uv.y < 1.0);
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      Vec2 o = sys.chart(pts[j]);
      CHECK((std::abs(uv.x - o.x) > 1e-12 || std::abs(uv.y - o.y) > 1e-12));
    }
  }
}

TEST_CASE("generic paths bracket through two legs") {
  BaseSystem sys = full2();
  BasePoint x = sys.sample_point(0);
  BasePoint z = sys.sample_point(5);
  for (bool sf : {true, false}) {
    auto legs = sys.su_path(x, z, sf);
    REQUIRE(legs.size() == 2);
    CHECK(legs[0].tag == (sf ? LeafTag::stable : LeafTag::unstable));
    CHECK(legs[1].tag == (sf ? LeafTag::unstable : LeafTag::stable));
    CHECK(sys.same_point(legs[0].from, x, 0.0));
    CHECK(sys.same_point(legs[1].to, z, 0.0));
    CHECK(sys.same_point(legs[0].to, legs[1].from, 0.0));
    for (const auto& leg : legs) {
      int dir = leg.tag == LeafTag::stable ? 1 : -1;
      CHECK(sys.dist(sys.apply(leg.from, 40 * dir), sys.apply(leg.to, 40 * dir)) < 1e-9);
    }
  }
}

TEST_CASE("doubly asymptotic words get one leg per requested order") {
  BaseSystem sys = full2();
  BasePoint x0 = SymbolPoint::periodic({0, 1});
  auto pairs = sys.homoclinic_points(x0, 8);
  REQUIRE(static_cast<int>(pairs.size()) >= 8);
  for (const auto& pr : pairs) {
    CHECK(sys.same_point(pr.first, pr.second, 0.0));
    const BasePoint& w = pr.first;
    CHECK(sys.dist(sys.apply(w, 60), sys.apply(x0, 60)) < 1e-9);
    CHECK(sys.dist(sys.apply(w, -60), sys.apply(x0, -60)) < 1e-9);
    auto s_route = sys.su_path(x0, w, true);
    auto u_route = sys.su_path(x0, w, false);
    REQUIRE(s_route.size() == 1);
    REQUIRE(u_route.size() == 1);
    CHECK(s_route[0].tag == LeafTag::stable);
    CHECK(u_route[0].tag == LeafTag::unstable);
  }
}

TEST_CASE("one sided words loop through the tail closure") {
  BaseSystem sys = full2();
  BasePoint x0 = SymbolPoint::periodic({0, 1});
  // z matches the anchor future exactly but has an alien all-one past
  SymbolPoint z = SymbolPoint::spliced({1, 1}, {1}, {}, {0, 1});
  auto direct = sys.su_path(x0, z, true);
  REQUIRE(direct.size() == 1);
  CHECK(direct[0].tag == LeafTag::stable);
  auto loop = sys.su_path(x0, z, false);
  REQUIRE(loop.size() == 3);
  CHECK(loop[0].tag == LeafTag::unstable);
  CHECK(loop[1].tag == LeafTag::stable);
  CHECK(loop[2].tag == LeafTag::unstable);
  CHECK(sys.same_point(loop[0].from, x0, 0.0));
  CHECK(sys.same_point(loop[2].to, z, 0.0));
  CHECK(sys.same_point(loop[0].to, loop[1].from, 0.0));
  CHECK(sys.same_point(loop[1].to, loop[2].from, 0.0));
  for (const auto& leg : loop) {
    int dir = leg.tag == LeafTag::stable ? 1 : -1;
    CHECK(sys.dist(sys.apply(leg.from, 40 * dir), sys.apply(leg.to, 40 * dir)) < 1e-9);
  }
}

TEST_CASE("powered shifts anchor period two words") {
  BaseSystem sys = ring3();
  BaseSystem sys2 = sys.powered(2);
  BasePoint x0 = SymbolPoint::periodic({0, 1});
  CHECK(sys2.same_point(sys2.apply(x0, 1), sys.apply(x0, 2), 0.0));
  auto pairs = sys2.homoclinic_points(x0, 6);
  REQUIRE(static_cast<int>(pairs.size()) >= 6);
  for (const auto& pr : pairs) {
    CHECK(sys2.dist(sys2.apply(pr.first, 30), sys2.apply(x0, 30)) < 1e-8);
    CHECK(sys2.dist(sys2.apply(pr.first, -30), sys2.apply(x0, -30)) < 1e-8);
  }
}

TEST_CASE("orbits that nearly close shadow an exact periodic word") {
  BaseSystem sys = full2();
  // agree with the period three word on [-9, 9), alien tails beyond
  SymbolPoint y = SymbolPoint::periodic({0, 1, 1});
  Word core_p, core_f;
  for (int i = 0; i < 9; ++i) core_p.push_back(y.symbol(-9 + i));
  for (int i = 0; i < 9; ++i) core_f.push_back(y.symbol(i));
  SymbolPoint z = SymbolPoint::spliced({0}, core_p, core_f, {0});
  REQUIRE(sys.dist(sys.apply(z, 3), z) <= sys.constants().epsilon0);
  auto rep = sys.closing(z, 3);
  CHECK(sys.same_point(sys.apply(rep.p, 3), rep.p, 0.0));
  CHECK(rep.max_ratio <= 1.0 + 1e-9);
  for (std::size_t j = 0; j < rep.orbit_dist.size(); ++j)
    CHECK(rep.orbit_dist[j] <= rep.allowed[j] * (1.0 + 1e-9));
}

TEST_CASE("shift moves the disagreement window") {
  BaseSystem sys = full2();
  SymbolPoint x = SymbolPoint::periodic({0, 1});
  SymbolPoint y = SymbolPoint::spliced({1, 1}, {0, 1}, {0, 1}, {1, 1});
  double before = sys.dist(x, y);
  // shifting forward moves the past deviation away and the future deviation in
  SymbolPoint xs = x.shifted(2), ys = y.shifted(2);
  CHECK(sys.dist(xs, ys) > before);
}
