#include "holocycle/interp.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>

namespace holocycle {

double frac(double t) {
  double f = t - std::floor(t);
  if (f >= 1.0) f = 0.0;  // rounding guard at the seam
  return f;
}

std::vector<double> solve_cyclic_tridiagonal(double a, double b, double c,
                                             const std::vector<double>& d) {
  const int n = static_cast<int>(d.size());
  if (n == 1) return {d[0] / (a + b + c)};
  if (n == 2) {
    // wraparound doubles the off-diagonal couplings
    const double b00 = b, b01 = a + c, b10 = a + c, b11 = b;
    const double det = b00 * b11 - b01 * b10;
    return {(b11 * d[0] - b01 * d[1]) / det, (b00 * d[1] - b10 * d[0]) / det};
  }
  // Sherman-Morrison splitting of the cyclic system into a plain Thomas solve.
  const double gamma = -b;
  std::vector<double> diag(n, b), rhs1 = d, rhs2(n, 0.0);
  diag[0] = b - gamma;
  diag[n - 1] = b - a * c / gamma;
  rhs2[0] = gamma;
  rhs2[n - 1] = c;

  auto thomas = [&](std::vector<double>& rhs) {
    std::vector<double> cp(n, 0.0);
    cp[0] = c / diag[0];
    rhs[0] /= diag[0];
    for (int i = 1; i < n; ++i) {
      const double m = diag[i] - a * cp[i - 1];
      cp[i] = c / m;
      rhs[i] = (rhs[i] - a * rhs[i - 1]) / m;
    }
    for (int i = n - 2; i >= 0; --i) rhs[i] -= cp[i] * rhs[i + 1];
  };
  thomas(rhs1);
  thomas(rhs2);
  const double fact = (rhs1[0] + a * rhs1[n - 1] / gamma) /
                      (1.0 + rhs2[0] + a * rhs2[n - 1] / gamma);
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = rhs1[i] - fact * rhs2[i];
  return x;
}

PeriodicSpline::PeriodicSpline(std::vector<double> values) : y_(std::move(values)) {
  const int n = size();
  if (n == 0) return;
  if (n == 1) {
    s_ = {0.0};
    return;
  }
  const double h = 1.0 / n;
  std::vector<double> rhs(n);
  for (int i = 0; i < n; ++i) {
    const double yn = y_[(i + 1) % n], yp = y_[(i + n - 1) % n];
    rhs[i] = 3.0 * (yn - yp) / h;
  }
  s_ = solve_cyclic_tridiagonal(1.0, 4.0, 1.0, rhs);
}

double PeriodicSpline::operator()(double t) const {
  const int n = size();
  if (n == 0) return 0.0;
  if (n == 1) return y_[0];
  const double x = frac(t) * n;
  int i = static_cast<int>(x);
  if (i >= n) i = n - 1;
  const double u = x - i;
  const int j = (i + 1) % n;
  const double h = 1.0 / n;
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y_[i] + (u3 - 2 * u2 + u) * h * s_[i] +
         (-2 * u3 + 3 * u2) * y_[j] + (u3 - u2) * h * s_[j];
}

double PeriodicSpline::derivative(double t) const {
  const int n = size();
  if (n <= 1) return 0.0;
  const double x = frac(t) * n;
  int i = static_cast<int>(x);
  if (i >= n) i = n - 1;
  const double u = x - i;
  const int j = (i + 1) % n;
  const double h = 1.0 / n;
  const double u2 = u * u;
  return ((6 * u2 - 6 * u) * y_[i] + (3 * u2 - 4 * u + 1) * h * s_[i] +
          (-6 * u2 + 6 * u) * y_[j] + (3 * u2 - 2 * u) * h * s_[j]) / h;
}

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// FFTW planning is not thread safe; plans are cached per size under a lock
// and executed with the new-array interface.
struct FftPlans {
  fftw_plan fwd = nullptr, bwd = nullptr;
  int n = 0;
};

FftPlans& plans_for(int n) {
  static std::mutex mu;
  static std::map<int, FftPlans> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  FftPlans p;
  p.n = n;
  std::vector<double> in(n);
  std::vector<std::complex<double>> out(n / 2 + 1);
  p.fwd = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                               FFTW_ESTIMATE);
  p.bwd = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(out.data()), in.data(),
                               FFTW_ESTIMATE);
  return cache.emplace(n, p).first->second;
}

std::mutex& exec_mutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

std::vector<std::vector<double>> spectral_derivatives(const std::vector<double>& values,
                                                      int order) {
  const int n = static_cast<int>(values.size());
  if (!is_power_of_two(n))
    throw std::invalid_argument("spectral_derivatives: size must be a power of two");
  FftPlans& plans = plans_for(n);
  std::vector<double> in = values;
  std::vector<std::complex<double>> spec(n / 2 + 1);
  {
    std::lock_guard<std::mutex> lock(exec_mutex());
    fftw_execute_dft_r2c(plans.fwd, in.data(), reinterpret_cast<fftw_complex*>(spec.data()));
  }
  for (auto& c : spec) c /= n;

  std::vector<std::vector<double>> out;
  out.reserve(order);
  const double two_pi = 2.0 * M_PI;
  for (int j = 1; j <= order; ++j) {
    std::vector<std::complex<double>> dspec(n / 2 + 1);
    for (int k = 0; k <= n / 2; ++k) {
      std::complex<double> f(0.0, two_pi * k);
      std::complex<double> mult = std::pow(f, j);
      if (k == n / 2 && (j % 2) == 1) mult = 0.0;  // odd derivative kills the Nyquist bin
      dspec[k] = spec[k] * mult;
    }
    std::vector<double> d(n);
    {
      std::lock_guard<std::mutex> lock(exec_mutex());
      fftw_execute_dft_c2r(plans.bwd, reinterpret_cast<fftw_complex*>(dspec.data()), d.data());
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<std::vector<double>> finite_difference_derivatives(const std::vector<double>& values,
                                                               int order) {
  const int n = static_cast<int>(values.size());
  std::vector<std::vector<double>> out;
  std::vector<double> cur = values;
  const double h = 1.0 / n;
  for (int j = 1; j <= order; ++j) {
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) {
      const double m2 = cur[(i + n - 2) % n], m1 = cur[(i + n - 1) % n];
      const double p1 = cur[(i + 1) % n], p2 = cur[(i + 2) % n];
      d[i] = (m2 - 8 * m1 + 8 * p1 - p2) / (12 * h);
    }
    out.push_back(d);
    cur = std::move(d);
  }
  return out;
}

double top_octave_energy_fraction(const std::vector<double>& values) {
  const int n = static_cast<int>(values.size());
  if (!is_power_of_two(n) || n < 8) return 1.0;
  FftPlans& plans = plans_for(n);
  std::vector<double> in = values;
  std::vector<std::complex<double>> spec(n / 2 + 1);
  {
    std::lock_guard<std::mutex> lock(exec_mutex());
    fftw_execute_dft_r2c(plans.fwd, in.data(), reinterpret_cast<fftw_complex*>(spec.data()));
  }
  double total = 0.0, top = 0.0;
  for (int k = 1; k <= n / 2; ++k) {
    const double e = std::norm(spec[k]);
    total += e;
    if (k >= n / 4) top += e;
  }
  if (total <= 0.0) return 0.0;
  return top / total;
}

}  // namespace holocycle
