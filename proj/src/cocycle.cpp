#include "holocycle/cocycle.hpp"

#include <algorithm>
#include <cmath>

#include "holocycle/errors.hpp"

namespace holocycle {

Cocycle::Cocycle(BaseSystem sys, Generator gen, int grid_size, int jet_order)
    : sys_(std::move(sys)), gen_(std::move(gen)), grid_(grid_size), order_(jet_order) {
  if (grid_ < 8 || (grid_ & (grid_ - 1)) != 0)
    throw ConfigInvalid("cocycle grid size must be a power of two, at least 8");
  if (order_ < 0 || order_ > 6) throw ConfigInvalid("jet order must be in 0..6");
}

CircleDiffeo Cocycle::at(const BasePoint& x) const {
  const std::string key = sys_.point_key(x);
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->map.find(key);
    if (it != cache_->map.end()) return it->second;
  }
  CircleDiffeo g = gen_(x);
  if (g.grid_size() != grid_) g = g.resampled(grid_);
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    if (cache_->map.size() > 50000) cache_->map.clear();
    cache_->map.emplace(key, g);
  }
  return g;
}

CircleDiffeo Cocycle::iterate(const BasePoint& x, long n) const {
  if (n == 0) return CircleDiffeo::identity(grid_, order_);
  if (n < 0) return iterate(sys_.apply(x, n), -n).inverse();
  BasePoint cur = x;
  CircleDiffeo g = at(cur);
  for (long k = 1; k < n; ++k) {
    cur = sys_.apply(cur, 1);
    g = compose(at(cur), g);
  }
  return g;
}

Cocycle Cocycle::powered(int n0) const {
  Cocycle out;
  out.sys_ = sys_.powered(n0);
  out.grid_ = grid_;
  out.order_ = order_;
  Cocycle orig = *this;
  out.gen_ = [orig, n0](const BasePoint& x) { return orig.iterate(x, n0); };
  return out;
}

Cocycle Cocycle::c0_view() const {
  Cocycle out;
  out.sys_ = sys_;
  out.grid_ = grid_;
  out.order_ = 0;
  Cocycle orig = *this;
  out.gen_ = [orig](const BasePoint& x) { return orig.at(x).c0_only(); };
  return out;
}

Cocycle::HolderFit Cocycle::estimate_holder(int pairs) const {
  std::vector<double> lu, lv;
  std::vector<std::pair<double, double>> raw;
  const double eps = sys_.constants().epsilon;
  const int k = std::min(order_, 1);
  for (int i = 0; i < pairs; ++i) {
    BasePoint x = sys_.sample_point(i);
    BasePoint z = sys_.sample_point(i + 1009);
    auto legs = sys_.su_path(x, z, true);
    if (legs.empty() || legs[0].tag != LeafTag::stable) continue;
    long m = i % 6;
    BasePoint px = sys_.apply(x, m);
    BasePoint py = sys_.apply(legs[0].to, m);
    double delta = sys_.dist(px, py);
    if (delta <= 0.0 || delta > eps) continue;
    double dfib = dk_surrogate(at(px), at(py), k);
    if (dfib <= 0.0) continue;
    lu.push_back(std::log(delta));
    lv.push_back(std::log(dfib));
    raw.emplace_back(delta, dfib);
  }
  HolderFit fit;
  fit.pairs_used = static_cast<int>(raw.size());
  if (raw.size() < 3) {
    fit.exponent = 1.0;
    for (auto& [d, f] : raw) fit.constant = std::max(fit.constant, f / d);
    return fit;
  }
  double mu = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < lu.size(); ++i) {
    mu += lu[i];
    mv += lv[i];
  }
  mu /= static_cast<double>(lu.size());
  mv /= static_cast<double>(lv.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < lu.size(); ++i) {
    num += (lu[i] - mu) * (lv[i] - mv);
    den += (lu[i] - mu) * (lu[i] - mu);
  }
  fit.exponent = den > 0.0 ? num / den : 1.0;
  fit.exponent = std::clamp(fit.exponent, 0.05, 1.5);
  for (auto& [d, f] : raw)
    fit.constant = std::max(fit.constant, f / std::pow(d, fit.exponent));
  return fit;
}

Cocycle::GrowthEstimate Cocycle::norm_growth(int n_max, int samples) const {
  GrowthEstimate est;
  est.norms.assign(static_cast<std::size_t>(n_max), 1.0);
  for (int j = 0; j < samples; ++j) {
    BasePoint cur = sys_.sample_point(j);
    CircleDiffeo g = at(cur);
    for (int n = 1; n <= n_max; ++n) {
      if (n > 1) {
        cur = sys_.apply(cur, 1);
        g = compose(at(cur), g);
      }
      JetNorms nm = g.jet_norms(1);
      double slope_hi = nm.sup.empty() ? 1.0 : nm.sup[0];
      double val = std::max({1.0, slope_hi, nm.min_slope > 0.0 ? 1.0 / nm.min_slope : 1e300});
      est.norms[static_cast<std::size_t>(n - 1)] =
          std::max(est.norms[static_cast<std::size_t>(n - 1)], val);
    }
  }
  est.rho = 1.0;
  for (int n = 1; n <= n_max; ++n)
    est.rho = std::max(est.rho,
                       std::pow(est.norms[static_cast<std::size_t>(n - 1)], 1.0 / n));
  return est;
}

Cocycle::DominationCheck Cocycle::domination(int n_max, int samples) const {
  DominationCheck chk;
  chk.rho = norm_growth(n_max, samples).rho;
  chk.lambda = sys_.constants().lambda;
  chk.margin.resize(static_cast<std::size_t>(order_) + 1);
  for (int k = 0; k <= order_; ++k)
    chk.margin[static_cast<std::size_t>(k)] =
        1.0 - chk.lambda * std::pow(chk.rho, 2.0 * k + 1.0);
  chk.dominated = chk.margin.back() > 0.0;
  return chk;
}

}  // namespace holocycle
