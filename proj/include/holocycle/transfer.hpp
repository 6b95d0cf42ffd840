#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "holocycle/holonomy.hpp"

namespace holocycle {

/// Rotation number of the circle map.  Near-translations are read off their
/// translation part directly; otherwise the lift orbit of 0 is averaged over
/// `iterations` steps, giving roughly 1/iterations accuracy.
double rotation_number(const CircleDiffeo& h, long iterations = 1L << 18);

/// Sup-distance from the translation family: half the oscillation of h - id.
double rotation_defect(const CircleDiffeo& h);

/// Angle of the nearest translation (midpoint of the oscillation of h - id).
double nearest_rotation_angle(const CircleDiffeo& h);

struct PeriodicObstruction {
  BasePoint point;
  int period = 0;  // in system steps
  double rot_a = 0.0, rot_b = 0.0;
  double gap = 0.0;  // circle distance between the return rotation numbers
};

/// Rotation numbers of the two return maps over every periodic orbit of
/// period at most max_period, one representative per orbit.  Equality of the
/// pair on all orbits is necessary for the cocycles to be cohomologous.
std::vector<PeriodicObstruction> periodic_obstructions(const Cocycle& a, const Cocycle& b,
                                                       int max_period,
                                                       long long budget = 20000);

/// Candidate conjugation between two cocycles, transported from one anchor
/// value along stable/unstable paths.  With value P at x and the leafwise
/// transports H of each cocycle, the rule per leg is
/// P(to) = H_a(from, to) . P(from) . H_b(from, to)^{-1}.
class TransferSection {
 public:
  TransferSection(Cocycle alpha, Cocycle beta, BasePoint anchor, CircleDiffeo anchor_value,
                  TruncationSettings ts = {}, int cert_order = 0);

  CircleDiffeo at(const BasePoint& z, bool stable_first = true) const;
  /// d0 between the two leg orders at z.
  double path_gap(const BasePoint& z) const;
  /// sup distance of beta(z)^{-1} . P(Fz)^{-1} . alpha(z) . P(z) from the
  /// identity, F being the step of the section's own system.
  double residual(const BasePoint& z) const;
  /// Same residual against externally supplied one-step cocycles; used to test
  /// whether a section built over a power also works for the original step.
  double residual_against(const Cocycle& alpha1, const Cocycle& beta1,
                          const BasePoint& z) const;

  const BasePoint& anchor() const { return anchor_; }
  const Cocycle& alpha() const { return a_; }
  const Cocycle& beta() const { return b_; }

  /// Weakest jet certification among all transports performed so far, and
  /// whether any of them fell back to plain C0 values.
  int min_certified_order() const;
  bool any_degraded() const;

 private:
  Cocycle a_, b_;
  BasePoint anchor_;
  CircleDiffeo p0_;
  HolonomyComputer ha_, hb_;
  struct Cache {
    std::mutex mutex;
    std::unordered_map<std::string, CircleDiffeo> map;
    int min_cert = 1 << 20;
    bool degraded = false;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

struct SuComparison {
  HolonomyResult via_stable, via_unstable;
  double gap = 0.0;            // d0 between the two transports
  double loop_rotation = 0.0;  // rotation number of unstable^{-1} . stable
  double loop_defect = 0.0;    // distance of that loop from the translations
};

/// Transports the fiber over a homoclinic point into the anchor fiber along
/// both leaves.  The two maps agree whenever the cocycle admits a transfer to
/// rotations; the gap is the measured obstruction.
SuComparison compare_su_transport(const HolonomyComputer& hc, const BasePoint& s_rep,
                                  const BasePoint& u_rep, const BasePoint& target);

}  // namespace holocycle
