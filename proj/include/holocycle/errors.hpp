#pragma once

#include <stdexcept>
#include <string>

namespace holocycle {

enum class errc {
  bracket_out_of_range,
  inadmissible_splice,
  no_path,
  budget_exceeded,
  not_close_enough,
  shadowing_bound_violated,
  monotonicity_lost,
  not_on_same_leaf,
  no_convergence,
  not_homoclinic,
  poc_violated,
  witness_failed,
  not_periodic,
  config_invalid,
};

inline const char* errc_name(errc code) {
  switch (code) {
    case errc::bracket_out_of_range: return "BracketOutOfRange";
    case errc::inadmissible_splice: return "InadmissibleSplice";
    case errc::no_path: return "NoPath";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::not_close_enough: return "NotCloseEnough";
    case errc::shadowing_bound_violated: return "ShadowingBoundViolated";
    case errc::monotonicity_lost: return "MonotonicityLost";
    case errc::not_on_same_leaf: return "NotOnSameLeaf";
    case errc::no_convergence: return "NoConvergence";
    case errc::not_homoclinic: return "NotHomoclinic";
    case errc::poc_violated: return "POCViolated";
    case errc::witness_failed: return "WitnessFailed";
    case errc::not_periodic: return "NotPeriodic";
    case errc::config_invalid: return "ConfigInvalid";
  }
  return "Error";
}

/// Base class for all failures with a stable machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

struct BracketOutOfRange : Error {
  explicit BracketOutOfRange(const std::string& w) : Error(errc::bracket_out_of_range, w) {}
};
struct InadmissibleSplice : Error {
  explicit InadmissibleSplice(const std::string& w) : Error(errc::inadmissible_splice, w) {}
};
struct NoPath : Error {
  explicit NoPath(const std::string& w) : Error(errc::no_path, w) {}
};
struct BudgetExceeded : Error {
  explicit BudgetExceeded(const std::string& w) : Error(errc::budget_exceeded, w) {}
};
struct NotCloseEnough : Error {
  explicit NotCloseEnough(const std::string& w) : Error(errc::not_close_enough, w) {}
};
struct ShadowingBoundViolated : Error {
  explicit ShadowingBoundViolated(const std::string& w) : Error(errc::shadowing_bound_violated, w) {}
};
struct MonotonicityLost : Error {
  explicit MonotonicityLost(const std::string& w) : Error(errc::monotonicity_lost, w) {}
};
struct NotOnSameLeaf : Error {
  explicit NotOnSameLeaf(const std::string& w) : Error(errc::not_on_same_leaf, w) {}
};
struct NoConvergence : Error {
  explicit NoConvergence(const std::string& w) : Error(errc::no_convergence, w) {}
};
struct NotHomoclinic : Error {
  explicit NotHomoclinic(const std::string& w) : Error(errc::not_homoclinic, w) {}
};
struct POCViolated : Error {
  explicit POCViolated(const std::string& w) : Error(errc::poc_violated, w) {}
};
struct WitnessFailed : Error {
  explicit WitnessFailed(const std::string& w) : Error(errc::witness_failed, w) {}
};
struct NotPeriodic : Error {
  explicit NotPeriodic(const std::string& w) : Error(errc::not_periodic, w) {}
};
struct ConfigInvalid : Error {
  explicit ConfigInvalid(const std::string& w) : Error(errc::config_invalid, w) {}
};

}  // namespace holocycle
