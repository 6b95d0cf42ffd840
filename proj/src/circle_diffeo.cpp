#include "holocycle/circle_diffeo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "holocycle/errors.hpp"
#include "holocycle/jets.hpp"

namespace holocycle {

namespace {

constexpr double kInversionTol = 1e-13;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_grid(int m) {
  if (!is_power_of_two(m) || m < 8)
    throw std::invalid_argument("CircleDiffeo: grid size must be a power of two >= 8");
}

}  // namespace

const char* jet_source_name(JetSource s) {
  switch (s) {
    case JetSource::analytic: return "analytic";
    case JetSource::spectral: return "spectral";
    case JetSource::finite_difference: return "finite_difference";
    case JetSource::none: return "none";
  }
  return "?";
}

double circle_dist(double a, double b) {
  const double d = a - b;
  return std::fabs(d - std::round(d));
}

void CircleDiffeo::finalize(JetSource source) {
  source_ = source;
  const int m = grid_size();
  // Discrete monotonicity of the lift across every grid cell.
  for (int i = 0; i < m; ++i) {
    const double step = (psi_[(i + 1) % m] - psi_[i]) + 1.0 / m;
    if (step <= 0.0)
      throw MonotonicityLost("discrete lift slope <= 0 at cell " + std::to_string(i));
  }
  if (!jets_.empty()) {
    for (double v : jets_[0])
      if (v <= 0.0) throw MonotonicityLost("sampled derivative <= 0");
  }
  psi_spline_ = PeriodicSpline(psi_);
  jet_splines_.clear();
  jet_splines_.reserve(jets_.size());
  for (const auto& j : jets_) jet_splines_.emplace_back(j);
}

CircleDiffeo CircleDiffeo::identity(int grid_size, int jet_order) {
  check_grid(grid_size);
  CircleDiffeo d;
  d.psi_.assign(grid_size, 0.0);
  d.jets_.assign(jet_order, std::vector<double>(grid_size, 0.0));
  if (jet_order >= 1) d.jets_[0].assign(grid_size, 1.0);
  d.finalize(JetSource::analytic);
  return d;
}

CircleDiffeo CircleDiffeo::rotation(double angle, int grid_size, int jet_order) {
  CircleDiffeo d = identity(grid_size, jet_order);
  for (auto& v : d.psi_) v = angle;
  d.finalize(JetSource::analytic);
  return d;
}

CircleDiffeo CircleDiffeo::from_lift(const std::function<double(double)>& lift, int grid_size,
                                     int jet_order) {
  check_grid(grid_size);
  CircleDiffeo d;
  d.psi_.resize(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    const double t = static_cast<double>(i) / grid_size;
    d.psi_[i] = lift(t) - t;
  }
  JetSource src = JetSource::spectral;
  if (jet_order > 0) {
    // If the sampled data carries substantial top-octave energy the Fourier
    // route would amplify what is essentially noise; fall back.
    if (top_octave_energy_fraction(d.psi_) > 1e-3) src = JetSource::finite_difference;
    auto derivs = (src == JetSource::spectral) ? spectral_derivatives(d.psi_, jet_order)
                                               : finite_difference_derivatives(d.psi_, jet_order);
    d.jets_ = std::move(derivs);
    for (auto& v : d.jets_[0]) v += 1.0;  // lift = psi + id
  }
  d.finalize(src);
  return d;
}

CircleDiffeo CircleDiffeo::from_lift_jets(
    const std::vector<std::function<double(double)>>& lift_and_jets, int grid_size, int jet_order) {
  check_grid(grid_size);
  if (static_cast<int>(lift_and_jets.size()) < jet_order + 1)
    throw std::invalid_argument("from_lift_jets: need one callable per jet order");
  CircleDiffeo d;
  d.psi_.resize(grid_size);
  d.jets_.assign(jet_order, std::vector<double>(grid_size, 0.0));
  for (int i = 0; i < grid_size; ++i) {
    const double t = static_cast<double>(i) / grid_size;
    d.psi_[i] = lift_and_jets[0](t) - t;
    for (int k = 1; k <= jet_order; ++k) d.jets_[k - 1][i] = lift_and_jets[k](t);
  }
  d.finalize(JetSource::analytic);
  return d;
}

CircleDiffeo CircleDiffeo::from_samples(std::vector<double> lift_samples, int jet_order,
                                        JetSource how) {
  const int m = static_cast<int>(lift_samples.size());
  check_grid(m);
  CircleDiffeo d;
  d.psi_.resize(m);
  for (int i = 0; i < m; ++i) d.psi_[i] = lift_samples[i] - static_cast<double>(i) / m;
  if (jet_order > 0) {
    if (how == JetSource::spectral && top_octave_energy_fraction(d.psi_) > 1e-3)
      how = JetSource::finite_difference;
    auto derivs = (how == JetSource::finite_difference)
                      ? finite_difference_derivatives(d.psi_, jet_order)
                      : spectral_derivatives(d.psi_, jet_order);
    d.jets_ = std::move(derivs);
    for (auto& v : d.jets_[0]) v += 1.0;
  } else {
    how = JetSource::none;
  }
  d.finalize(how);
  return d;
}

double CircleDiffeo::lift(double t) const { return t + psi_spline_(t); }

double CircleDiffeo::circle_image(double x) const { return frac(lift(x)); }

double CircleDiffeo::derivative(int k, double t) const {
  if (k < 1 || k > jet_order())
    throw std::invalid_argument("CircleDiffeo::derivative: order out of range");
  return jet_splines_[k - 1](t);
}

std::vector<double> CircleDiffeo::lift_samples() const {
  const int m = grid_size();
  std::vector<double> out(m);
  for (int i = 0; i < m; ++i) out[i] = psi_[i] + static_cast<double>(i) / m;
  return out;
}

CircleDiffeo compose(const CircleDiffeo& g, const CircleDiffeo& h) {
  return CircleDiffeo::compose3(g, h, CircleDiffeo());
}

CircleDiffeo CircleDiffeo::compose3(const CircleDiffeo& outer, const CircleDiffeo& mid,
                                    const CircleDiffeo& inner) {
  const bool have_inner = inner.grid_size() > 0;
  const CircleDiffeo& first = have_inner ? inner : mid;
  const int m = first.grid_size();
  if (mid.grid_size() != m || outer.grid_size() != m)
    throw std::invalid_argument("compose: grid sizes differ; resample first");
  const int r = std::min({outer.jet_order(), mid.jet_order(),
                          have_inner ? inner.jet_order() : outer.jet_order()});

  CircleDiffeo out;
  out.psi_.resize(m);
  out.jets_.assign(r, std::vector<double>(m, 0.0));
  std::vector<double> ja(r), jb(r), jc(r);
  for (int i = 0; i < m; ++i) {
    const double t = static_cast<double>(i) / m;
    double u = t;
    std::vector<double>* acc = nullptr;
    if (have_inner) {
      u = t + inner.psi_[i];  // node value, interpolation free
      for (int k = 1; k <= r; ++k) ja[k - 1] = inner.jets_[k - 1][i];
      acc = &ja;
    }
    const double v = u + mid.psi_spline_(u);
    if (r > 0) {
      for (int k = 1; k <= r; ++k) jb[k - 1] = mid.jet_splines_[k - 1](u);
      if (acc) {
        jb = compose_jets(jb, *acc);
      }
      acc = &jb;
    }
    const double w = v + outer.psi_spline_(v);
    if (r > 0) {
      for (int k = 1; k <= r; ++k) jc[k - 1] = outer.jet_splines_[k - 1](v);
      jc = compose_jets(jc, *acc);
      for (int k = 1; k <= r; ++k) out.jets_[k - 1][i] = jc[k - 1];
    }
    out.psi_[i] = w - t;
  }
  JetSource src = std::max(outer.source_, mid.source_);
  if (have_inner) src = std::max(src, inner.source_);
  if (r == 0) src = JetSource::none;
  out.finalize(src);
  return out;
}

CircleDiffeo CircleDiffeo::inverse() const {
  const int m = grid_size();
  check_grid(m);
  CircleDiffeo out;
  out.psi_.resize(m);
  const int r = jet_order();
  out.jets_.assign(r, std::vector<double>(m, 0.0));

  // The lift maps [0,1) monotonically onto [h0, h0+1).  For each node t_i
  // shift the target into that window, bracket it against the sampled lift
  // values, then polish with Newton (bisection whenever a step would leave
  // the bracket).  With target = t_i + K the inverse-lift periodic part at
  // t_i is simply w - target.
  const double h0 = psi_[0];
  const std::vector<double> hvals = lift_samples();
  auto cell_val = [&](int c) { return (c < m) ? hvals[c] : hvals[c - m] + 1.0; };
  for (int i = 0; i < m; ++i) {
    const double t = static_cast<double>(i) / m;
    const double target = t + std::ceil(h0 - t);
    int lo_c = 0, hi_c = m;  // invariant: cell_val(lo_c) <= target < cell_val(hi_c)
    while (hi_c - lo_c > 1) {
      const int mid_c = (lo_c + hi_c) / 2;
      if (cell_val(mid_c) <= target)
        lo_c = mid_c;
      else
        hi_c = mid_c;
    }
    double lo = static_cast<double>(lo_c) / m;
    double hi = static_cast<double>(lo_c + 1) / m;
    const double flo = cell_val(lo_c), fhi = cell_val(lo_c + 1);
    double x = (fhi > flo) ? lo + (hi - lo) * (target - flo) / (fhi - flo) : 0.5 * (lo + hi);
    for (int iter = 0; iter < 80; ++iter) {
      const double f = x + psi_spline_(x) - target;
      if (std::fabs(f) < kInversionTol) break;
      if (f > 0.0)
        hi = x;
      else
        lo = x;
      const double df = 1.0 + psi_spline_.derivative(x);
      double nx = (df > 0.0) ? x - f / df : lo;
      if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
      x = nx;
    }
    if (r > 0) {
      std::vector<double> hj(r);
      for (int k = 1; k <= r; ++k) hj[k - 1] = jet_splines_[k - 1](x);
      auto wj = inverse_jets(hj);
      for (int k = 1; k <= r; ++k) out.jets_[k - 1][i] = wj[k - 1];
    }
    out.psi_[i] = x - target;
  }
  out.finalize(source_);
  return out;
}

CircleDiffeo invert(const CircleDiffeo& h) { return h.inverse(); }

CircleDiffeo CircleDiffeo::resampled(int new_grid_size) const {
  check_grid(new_grid_size);
  CircleDiffeo out;
  out.psi_.resize(new_grid_size);
  const int r = jet_order();
  out.jets_.assign(r, std::vector<double>(new_grid_size, 0.0));
  for (int i = 0; i < new_grid_size; ++i) {
    const double t = static_cast<double>(i) / new_grid_size;
    out.psi_[i] = psi_spline_(t);
    for (int k = 1; k <= r; ++k) out.jets_[k - 1][i] = jet_splines_[k - 1](t);
  }
  out.finalize(source_);
  return out;
}

CircleDiffeo CircleDiffeo::c0_only() const {
  CircleDiffeo out;
  out.psi_ = psi_;
  out.finalize(source_);
  return out;
}

JetNorms CircleDiffeo::jet_norms(int max_order) const {
  JetNorms n;
  const int r = std::min(max_order, jet_order());
  n.sup.resize(r, 0.0);
  for (int k = 1; k <= r; ++k) {
    double s = 0.0;
    for (double v : jets_[k - 1]) s = std::max(s, std::fabs(v));
    n.sup[k - 1] = s;
  }
  if (jet_order() >= 1) {
    double ms = jets_[0][0];
    for (double v : jets_[0]) ms = std::min(ms, v);
    n.min_slope = ms;
  } else {
    const int m = grid_size();
    double ms = 1e300;
    for (int i = 0; i < m; ++i)
      ms = std::min(ms, (psi_[(i + 1) % m] - psi_[i]) * m + 1.0);
    n.min_slope = ms;
  }
  return n;
}

double d0(const CircleDiffeo& g, const CircleDiffeo& h) {
  if (g.grid_size() != h.grid_size())
    throw std::invalid_argument("d0: grid sizes differ");
  double s = 0.0;
  const auto& a = g.psi_samples();
  const auto& b = h.psi_samples();
  for (size_t i = 0; i < a.size(); ++i) s = std::max(s, circle_dist(a[i], b[i]));
  return s;
}

double dk_surrogate(const CircleDiffeo& g, const CircleDiffeo& h, int k) {
  double s = d0(g, h);
  const int r = std::min({k, g.jet_order(), h.jet_order()});
  for (int j = 1; j <= r; ++j) {
    const auto& a = g.jet_samples(j);
    const auto& b = h.jet_samples(j);
    for (size_t i = 0; i < a.size(); ++i) s = std::max(s, std::fabs(a[i] - b[i]));
  }
  return s;
}

}  // namespace holocycle
