#pragma once

#include <string>
#include <vector>

#include "holocycle/cocycle.hpp"

namespace holocycle {

struct TruncationSettings {
  double tol = 1e-10;     // target bound on the dropped tail
  int max_depth = 200;    // orbit levels past the push-in depth
  int window = 5;         // successive ratios entering the contraction fit
  int extra_burn_in = 3;  // levels after push-in before ratios are trusted
  int push_in_cap = 300;  // levels allowed to reach the local leaf
};

struct HolonomyResult {
  CircleDiffeo map;
  int depth = 0;    // orbit levels actually used
  int push_in = 0;  // levels needed before the pair entered the local leaf
  double final_increment = 0.0;
  double tail_bound = 0.0;
  double contraction = 0.0;  // geometric-mean ratio of late increments
  int certified_order = 0;   // jet order covered by the convergence estimate
  bool degraded = false;     // derivative recursion abandoned, values kept
  std::string degrade_reason;  // "monotonicity", "jet_overflow", or "jet_growth"
  std::vector<double> increments;
};

/// Leafwise transport of fibers.  stable(y, z) is the limit of
/// (alpha^n(z))^{-1} . alpha^n(y) over points on one stable leaf; unstable
/// transport runs the orbit backwards.  Each deepening stage is rebuilt
/// inside out so every intermediate composite stays near the final map
/// instead of growing like the cocycle norm.
class HolonomyComputer {
 public:
  explicit HolonomyComputer(const Cocycle& coc, TruncationSettings ts = {},
                            int cert_order = -1);

  HolonomyResult stable(const BasePoint& y, const BasePoint& z) const;
  HolonomyResult unstable(const BasePoint& y, const BasePoint& z) const;
  HolonomyResult transport(const PathLeg& leg) const;  // dispatch on the tag

 private:
  HolonomyResult run(const BasePoint& y, const BasePoint& z, bool stable_side) const;
  Cocycle coc_;
  TruncationSettings ts_;
  int cert_;
};

}  // namespace holocycle
