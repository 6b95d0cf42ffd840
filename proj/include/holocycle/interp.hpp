#pragma once

#include <vector>

namespace holocycle {

/// C2 cubic spline through equally spaced samples of a 1-periodic function.
///
/// Node slopes come from the cyclic tridiagonal system of the periodic
/// spline; evaluation is Hermite on the containing cell, so lookups are O(1)
/// on the uniform grid.
class PeriodicSpline {
 public:
  PeriodicSpline() = default;
  explicit PeriodicSpline(std::vector<double> values);

  double operator()(double t) const;
  /// First derivative of the interpolant (not of the sampled function's own
  /// derivative data; callers that track jets spline those separately).
  double derivative(double t) const;

  int size() const { return static_cast<int>(y_.size()); }
  bool empty() const { return y_.empty(); }
  const std::vector<double>& values() const { return y_; }

 private:
  std::vector<double> y_;
  std::vector<double> s_;  // node slopes
};

/// Solves a*x[i-1] + b*x[i] + c*x[i+1] = d[i] with cyclic wraparound.
std::vector<double> solve_cyclic_tridiagonal(double a, double b, double c,
                                             const std::vector<double>& d);

/// Derivatives 1..order of a 1-periodic function from n equally spaced
/// samples by Fourier differentiation. n must be a power of two.
std::vector<std::vector<double>> spectral_derivatives(const std::vector<double>& values,
                                                      int order);

/// Fallback for samples too rough for the Fourier route: iterated fourth
/// order centred differences on the periodic grid.
std::vector<std::vector<double>> finite_difference_derivatives(const std::vector<double>& values,
                                                               int order);

/// Energy fraction of the top octave of the spectrum; used to decide whether
/// sample data still resolves the function it came from.
double top_octave_energy_fraction(const std::vector<double>& values);

double frac(double t);  // t - floor(t), result in [0,1)

}  // namespace holocycle
