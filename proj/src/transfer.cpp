#include "holocycle/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "holocycle/errors.hpp"

namespace holocycle {

namespace {
double frac_unit(double t) {
  double y = t - std::floor(t);
  if (y >= 1.0) y = 0.0;
  if (y < 0.0) y += 1.0;
  return y;
}
}  // namespace

double rotation_defect(const CircleDiffeo& h) {
  const auto& psi = h.psi_samples();
  double lo = psi[0], hi = psi[0];
  for (double v : psi) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return 0.5 * (hi - lo);
}

double nearest_rotation_angle(const CircleDiffeo& h) {
  const auto& psi = h.psi_samples();
  double lo = psi[0], hi = psi[0];
  for (double v : psi) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return frac_unit(0.5 * (hi + lo));
}

double rotation_number(const CircleDiffeo& h, long iterations) {
  double defect = rotation_defect(h);
  if (defect < 1e-9) return nearest_rotation_angle(h);
  double t = 0.0;
  for (long i = 0; i < iterations; ++i) t = h.lift(t);
  return frac_unit(t / static_cast<double>(iterations));
}

std::vector<PeriodicObstruction> periodic_obstructions(const Cocycle& a, const Cocycle& b,
                                                       int max_period, long long budget) {
  const BaseSystem& sys = a.system();
  std::vector<PeriodicObstruction> out;
  for (int n = 1; n <= max_period; ++n) {
    auto pts = sys.periodic_points(n, budget);
    for (const auto& p : pts) {
      // primitive period only; smaller periods were already covered
      bool primitive = true;
      for (int d = 1; d < n && primitive; ++d)
        if (n % d == 0 && sys.same_point(sys.apply(p, d), p, 1e-12)) primitive = false;
      if (!primitive) continue;
      // one representative per orbit, chosen by minimal point key
      std::string k0 = sys.point_key(p);
      bool rep = true;
      BasePoint q = p;
      for (int j = 1; j < n && rep; ++j) {
        q = sys.apply(q, 1);
        if (sys.point_key(q) < k0) rep = false;
      }
      if (!rep) continue;
      PeriodicObstruction ob;
      ob.point = p;
      ob.period = n;
      ob.rot_a = rotation_number(a.iterate(p, n));
      ob.rot_b = rotation_number(b.iterate(p, n));
      ob.gap = circle_dist(ob.rot_a, ob.rot_b);
      out.push_back(std::move(ob));
    }
  }
  return out;
}

TransferSection::TransferSection(Cocycle alpha, Cocycle beta, BasePoint anchor,
                                 CircleDiffeo anchor_value, TruncationSettings ts,
                                 int cert_order)
    : a_(std::move(alpha)),
      b_(std::move(beta)),
      anchor_(std::move(anchor)),
      p0_(std::move(anchor_value)),
      ha_(a_, ts, cert_order),
      hb_(b_, ts, cert_order) {
  if (a_.grid_size() != b_.grid_size())
    throw ConfigInvalid("cocycle pair must share a grid size");
  if (p0_.grid_size() != a_.grid_size()) p0_ = p0_.resampled(a_.grid_size());
}

CircleDiffeo TransferSection::at(const BasePoint& z, bool stable_first) const {
  const BaseSystem& sys = a_.system();
  const std::string key = sys.point_key(z) + (stable_first ? "|s" : "|u");
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->map.find(key);
    if (it != cache_->map.end()) return it->second;
  }
  CircleDiffeo val = p0_;
  int worst_cert = 1 << 20;
  bool saw_degrade = false;
  for (const auto& leg : sys.su_path(anchor_, z, stable_first)) {
    HolonomyResult ra = ha_.transport(leg);
    HolonomyResult rb = hb_.transport(leg);
    worst_cert = std::min({worst_cert, ra.certified_order, rb.certified_order});
    saw_degrade = saw_degrade || ra.degraded || rb.degraded;
    val = CircleDiffeo::compose3(ra.map, val, rb.map.inverse());
  }
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    if (cache_->map.size() > 20000) cache_->map.clear();
    cache_->map.emplace(key, val);
    cache_->min_cert = std::min(cache_->min_cert, worst_cert);
    cache_->degraded = cache_->degraded || saw_degrade;
  }
  return val;
}

int TransferSection::min_certified_order() const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  return cache_->min_cert;
}

bool TransferSection::any_degraded() const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  return cache_->degraded;
}

double TransferSection::path_gap(const BasePoint& z) const {
  return d0(at(z, true), at(z, false));
}

double TransferSection::residual(const BasePoint& z) const {
  return residual_against(a_, b_, z);
}

double TransferSection::residual_against(const Cocycle& alpha1, const Cocycle& beta1,
                                         const BasePoint& z) const {
  const BaseSystem& sys1 = alpha1.system();
  CircleDiffeo pz = at(z);
  CircleDiffeo pfz = at(sys1.apply(z, 1));
  CircleDiffeo az = alpha1.at(z);
  if (az.grid_size() != pz.grid_size()) az = az.resampled(pz.grid_size());
  CircleDiffeo bz = beta1.at(z);
  if (bz.grid_size() != pz.grid_size()) bz = bz.resampled(pz.grid_size());
  CircleDiffeo mid = CircleDiffeo::compose3(pfz.inverse(), az, pz);
  CircleDiffeo r = compose(bz.inverse(), mid);
  return d0(r, CircleDiffeo::identity(r.grid_size(), 0));
}

SuComparison compare_su_transport(const HolonomyComputer& hc, const BasePoint& s_rep,
                                  const BasePoint& u_rep, const BasePoint& target) {
  SuComparison cmp;
  cmp.via_stable = hc.stable(s_rep, target);
  cmp.via_unstable = hc.unstable(u_rep, target);
  cmp.gap = d0(cmp.via_stable.map, cmp.via_unstable.map);
  CircleDiffeo loop = compose(cmp.via_unstable.map.inverse(), cmp.via_stable.map);
  cmp.loop_rotation = rotation_number(loop);
  cmp.loop_defect = rotation_defect(loop);
  return cmp;
}

}  // namespace holocycle
