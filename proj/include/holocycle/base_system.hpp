#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "holocycle/symbol_point.hpp"
#include "holocycle/torus_point.hpp"

namespace holocycle {

using BasePoint = std::variant<TorusPoint, SymbolPoint>;

enum class LeafTag { stable, unstable };

struct PathLeg {
  BasePoint from, to;
  LeafTag tag;
};

struct HyperbolicConstants {
  double C1 = 1.0;       // distortion in the contraction estimates
  double lambda = 0.5;   // contraction rate per step
  double epsilon = 0.25; // size of local stable/unstable sets
  double tau = 0.25;     // bracket domain radius
  double epsilon0 = 0.25;  // closing threshold
  double C5 = 2.0;         // closing constant
  double theta = 0.7071;   // closing decay rate, default sqrt(lambda)
};

struct ClosingReport {
  BasePoint p;
  double input_gap = 0.0;             // dist(f^n z, z)
  std::vector<double> orbit_dist;     // dist(f^j z, f^j p), j = 0..n
  std::vector<double> allowed;        // C5 theta^min(j, n-j) * input_gap
  double max_ratio = 0.0;             // max orbit_dist / allowed (0 when exact)
};

/// Hyperbolic base: either a toral automorphism or a subshift of finite type.
/// `powered(n0)` returns the same space driven by the n0-th iterate; stable
/// and unstable sets, brackets and paths are unchanged, only orbit stepping
/// and the contraction constants rescale.
class BaseSystem {
 public:
  /// Empty system; every operation throws until a factory result is assigned.
  BaseSystem() = default;
  static BaseSystem toral(const Mat2i& A);
  static BaseSystem sft(const std::vector<std::vector<int>>& transition, double metric_base);

  BaseSystem powered(int n0) const;
  BaseSystem base_step_system() const;  // step reset to 1
  int step() const { return step_; }
  bool is_toral() const;
  int alphabet_size() const;
  const HyperbolicConstants& constants() const { return consts_; }
  BaseSystem with_constants(const HyperbolicConstants& c) const;  // testing hook

  BasePoint apply(const BasePoint& x, long n) const;
  double dist(const BasePoint& x, const BasePoint& y) const;
  BasePoint bracket(const BasePoint& x, const BasePoint& y) const;
  std::vector<PathLeg> su_path(const BasePoint& x, const BasePoint& z,
                               bool stable_first = true) const;
  std::vector<BasePoint> periodic_points(int n, long long budget = 200000) const;
  ClosingReport closing(const BasePoint& z, int n) const;

  /// Continuous two-coordinate chart feeding the cocycle generator families.
  Vec2 chart(const BasePoint& x) const;
  bool same_point(const BasePoint& x, const BasePoint& y, double tol = 1e-12) const;
  std::string point_key(const BasePoint& x) const;
  /// Deterministic low-discrepancy point stream (prefix stable in the index).
  BasePoint sample_point(long index) const;

  /// Points in W^s(x0) ∩ W^u(x0) for a fixed point x0, paired as
  /// (stable-route representation, unstable-route representation); the two
  /// entries describe the same point of the space.
  std::vector<std::pair<BasePoint, BasePoint>> homoclinic_points(const BasePoint& x0,
                                                                 int count) const;

  // toral access
  const Mat2i& matrix() const;
  Vec2 stable_dir() const;
  Vec2 unstable_dir() const;
  double stable_eigenvalue() const;    // signed
  double unstable_eigenvalue() const;  // signed
  TorusPoint point_from_views(double x, double y) const;   // exact dyadic rational rep
  TorusPoint point_from_rationals(const Rational& x, const Rational& y) const;
  /// base + da e_s + db e_u in the same frame as `base`.
  TorusPoint leaf_point(const TorusPoint& base, double da, double db) const;
  std::pair<double, double> decompose(const Vec2& v) const;  // v = a e_s + b e_u

  // sft access
  bool transition_allowed(int i, int j) const;
  double metric_base() const;
  SymbolPoint validated(const SymbolPoint& p) const;  // throws InadmissibleSplice

 private:
  struct ToralData;
  struct SftData;
  const ToralData& t() const;
  const SftData& s() const;
  void refresh_view(TorusPoint& p) const;

  std::shared_ptr<const ToralData> toral_;
  std::shared_ptr<const SftData> sft_;
  int step_ = 1;
  HyperbolicConstants consts_;
};

}  // namespace holocycle
