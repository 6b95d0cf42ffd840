#pragma once

#include <functional>
#include <string>
#include <vector>

#include "holocycle/interp.hpp"

namespace holocycle {

/// Where the derivative samples of a diffeo came from.  Chain-rule transport
/// through compose/invert keeps the strongest tag of the operands.
enum class JetSource { analytic, spectral, finite_difference, none };

const char* jet_source_name(JetSource s);

struct JetNorms {
  std::vector<double> sup;  // sup |D^j h| for j = 1..k
  double min_slope = 0.0;   // min over grid of D^1 h
};

/// Orientation preserving circle diffeomorphism, stored as grid samples of a
/// degree-one lift h (h(t+1) = h(t) + 1) together with derivative samples up
/// to jet_order.  Immutable after construction; splines are built eagerly so
/// the value is safe to share across threads.
class CircleDiffeo {
 public:
  CircleDiffeo() = default;

  static CircleDiffeo identity(int grid_size, int jet_order);
  static CircleDiffeo rotation(double angle, int grid_size, int jet_order);
  /// Samples `lift` on the grid and differentiates spectrally (default) or by
  /// finite differences when the sampled data no longer resolves the function.
  static CircleDiffeo from_lift(const std::function<double(double)>& lift, int grid_size,
                                int jet_order);
  /// Analytic construction: callable for the lift plus one per derivative.
  static CircleDiffeo from_lift_jets(const std::vector<std::function<double(double)>>& lift_and_jets,
                                     int grid_size, int jet_order);
  static CircleDiffeo from_samples(std::vector<double> lift_samples, int jet_order,
                                   JetSource how = JetSource::spectral);

  int grid_size() const { return static_cast<int>(psi_.size()); }
  int jet_order() const { return static_cast<int>(jets_.size()); }
  JetSource jet_source() const { return source_; }

  double lift(double t) const;                  // h(t), degree-one lift
  double circle_image(double x) const;          // h(x) mod 1
  double derivative(int k, double t) const;     // k in 1..jet_order
  std::vector<double> lift_samples() const;     // h(i/m), i = 0..m-1
  const std::vector<double>& psi_samples() const { return psi_; }           // h - id at nodes
  const std::vector<double>& jet_samples(int k) const { return jets_[k - 1]; }

  CircleDiffeo inverse() const;
  CircleDiffeo resampled(int new_grid_size) const;
  CircleDiffeo c0_only() const;  // drop derivative data, keep values and source
  JetNorms jet_norms(int max_order) const;

  friend CircleDiffeo compose(const CircleDiffeo& g, const CircleDiffeo& h);
  /// outer(mid(inner(t))) in one pass; avoids building the spline of the
  /// intermediate composite, which matters in the holonomy inner loop.
  static CircleDiffeo compose3(const CircleDiffeo& outer, const CircleDiffeo& mid,
                               const CircleDiffeo& inner);

 private:
  void finalize(JetSource source);  // builds splines, checks monotonicity
  std::vector<double> psi_;                  // h(i/m) - i/m
  std::vector<std::vector<double>> jets_;    // jets_[k-1][i] = h^{(k)}(i/m)
  PeriodicSpline psi_spline_;
  std::vector<PeriodicSpline> jet_splines_;
  JetSource source_ = JetSource::none;
};

CircleDiffeo compose(const CircleDiffeo& g, const CircleDiffeo& h);
CircleDiffeo invert(const CircleDiffeo& h);

/// Sup over the grid of the circle distance between g(t) and h(t).
double d0(const CircleDiffeo& g, const CircleDiffeo& h);

/// max over j = 0..k of sup |D^j(lift_g - lift_h)|; the j = 0 term uses the
/// circle distance so the value is lift-choice independent.
double dk_surrogate(const CircleDiffeo& g, const CircleDiffeo& h, int k);

double circle_dist(double a, double b);  // distance on R/Z

}  // namespace holocycle
