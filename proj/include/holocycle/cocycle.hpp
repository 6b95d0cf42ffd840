#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "holocycle/base_system.hpp"
#include "holocycle/circle_diffeo.hpp"

namespace holocycle {

/// Circle-diffeomorphism valued cocycle over a hyperbolic base.  The one-step
/// generator is a callable point -> diffeo; iterates follow the composition
/// rule alpha^{n+m}(x) = alpha^n(f^m x) . alpha^m(x).  Generator outputs are
/// memoized by exact point key since orbit points repeat heavily.
class Cocycle {
 public:
  using Generator = std::function<CircleDiffeo(const BasePoint&)>;

  Cocycle() = default;
  Cocycle(BaseSystem sys, Generator gen, int grid_size, int jet_order);

  const BaseSystem& system() const { return sys_; }
  int grid_size() const { return grid_; }
  int jet_order() const { return order_; }

  CircleDiffeo at(const BasePoint& x) const;               // one step
  CircleDiffeo iterate(const BasePoint& x, long n) const;  // any n, sign allowed

  /// Same fiber maps driven by the n0-th iterate of the base.
  Cocycle powered(int n0) const;
  /// Copy whose generator output drops derivative data (fast C0 work).
  Cocycle c0_view() const;

  struct HolderFit {
    double constant = 0.0;  // sup of measured ratio dist_fiber / dist_base^exponent
    double exponent = 0.0;  // least squares slope in log-log
    int pairs_used = 0;
  };
  HolderFit estimate_holder(int pairs = 24) const;

  struct GrowthEstimate {
    std::vector<double> norms;  // norms[n-1] = worst slope growth of n-step maps
    double rho = 1.0;           // max over n of norms[n-1]^{1/n}, at least 1
  };
  GrowthEstimate norm_growth(int n_max = 8, int samples = 24) const;

  struct DominationCheck {
    double rho = 1.0;
    double lambda = 0.0;
    std::vector<double> margin;  // margin[k] = 1 - lambda * rho^{2k+1}, k = 0..order
    bool dominated = false;      // margin at the full jet order is positive
  };
  DominationCheck domination(int n_max = 8, int samples = 24) const;

 private:
  BaseSystem sys_;
  Generator gen_;
  int grid_ = 0, order_ = 0;
  struct Cache {
    std::mutex mutex;
    std::unordered_map<std::string, CircleDiffeo> map;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

}  // namespace holocycle
