// Acceptance gate: nine end-to-end criteria, one verdict line each.  Every
// tolerance is pinned here on purpose; loosening one is a deliberate act.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "holocycle/bundled_scenarios.hpp"
#include "holocycle/pipelines.hpp"
#include "holocycle/scenario.hpp"
#include "holocycle/transfer.hpp"

using namespace holocycle;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

int workers() {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::map<std::string, ScenarioRun>& cache() {
  static std::map<std::string, ScenarioRun> c;
  return c;
}

const ScenarioRun& get_run(const std::string& name) {
  auto it = cache().find(name);
  if (it != cache().end()) return it->second;
  const ScenarioConfig* sc = find_bundled_scenario(name);
  if (!sc) throw std::runtime_error("no bundled scenario named " + name);
  std::fprintf(stderr, "  running scenario %s ...\n", name.c_str());
  auto t0 = std::chrono::steady_clock::now();
  ScenarioRun run = run_scenario(*sc, workers());
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::fprintf(stderr, "  %s: verdict %s in %.1fs\n", name.c_str(), run.verdict.c_str(), secs);
  return cache().emplace(name, std::move(run)).first->second;
}

const CheckRow* find_check(const ScenarioRun& run, const std::string& name) {
  for (const auto& c : run.checks)
    if (c.name == name) return &c;
  return nullptr;
}

double result_num(const ScenarioRun& run, const std::string& key) {
  if (!run.results.contains(key) || !run.results.at(key).is_number())
    throw std::runtime_error(run.name + " has no numeric result '" + key + "'");
  return run.results.at(key).get<double>();
}

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------

void criterion_contraction_and_speed() {
  const ScenarioRun& bump = get_run("catmap_bump_holonomy");
  require(bump.verdict == "pass", "dominated shear scenario did not pass");
  const CheckRow* env = find_check(bump, "contraction_envelope");
  require(env != nullptr, "no contraction envelope check in the shear run");
  require(env->passed && env->value <= 1.0,
          "contraction envelope ratio " + fmt(env->value) + " above 1");

  // direct timing at grid 2048 on the same cocycle
  const ScenarioConfig* sc = find_bundled_scenario("catmap_bump_holonomy");
  BaseSystem sys = make_system(sc->base);
  const double lam = sys.constants().lambda;
  const double lam_cat = (3.0 - std::sqrt(5.0)) / 2.0;
  require(std::abs(lam - lam_cat) < 1e-12, "cat map contraction rate is not (3-sqrt5)/2");

  Cocycle alpha = make_cocycle(sc->alpha, sys, 2048, sc->jet_order);
  TruncationSettings ts;
  ts.tol = 3e-8;
  HolonomyComputer hc(alpha, ts, sc->jet_order);
  const double rho = alpha.norm_growth().rho;
  const double bound = std::pow(rho, 2.0 * sc->jet_order - 1.0) * lam + 0.05;

  double worst_seconds = 0.0, worst_q = 0.0;
  for (int i = 0; i < 2; ++i) {
    BasePoint y = sys.sample_point(40 + i);
    BasePoint z = i == 0 ? sys.leaf_point(std::get<TorusPoint>(y), 0.08, 0.0)
                         : sys.leaf_point(std::get<TorusPoint>(y), 0.0, 0.08);
    auto t0 = std::chrono::steady_clock::now();
    HolonomyResult h = i == 0 ? hc.stable(y, z) : hc.unstable(y, z);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    worst_seconds = std::max(worst_seconds, secs);
    worst_q = std::max(worst_q, h.contraction);
    require(!h.degraded, "grid 2048 transport lost its jet certificate");
  }
  require(worst_q <= bound, "late stage ratio " + fmt(worst_q) + " above envelope " + fmt(bound));
  require(worst_seconds < 5.0,
          "one grid 2048 transport took " + fmt(worst_seconds) + "s (budget 5s)");
}

void criterion_holonomy_identities() {
  for (const char* name : {"catmap_bump_holonomy", "sft_full2_rotation_holonomy"}) {
    const ScenarioRun& run = get_run(name);
    require(run.verdict == "pass", std::string(name) + " did not pass");
    require(result_num(run, "triples_stable") >= 50 && result_num(run, "triples_unstable") >= 50,
            std::string(name) + " used fewer than 50 triples per side");
    require(result_num(run, "max_composition_gap") <= 1e-6,
            std::string(name) + " composition gap " +
                fmt(result_num(run, "max_composition_gap")));
    require(result_num(run, "max_equivariance_gap") <= 1e-6,
            std::string(name) + " equivariance gap " +
                fmt(result_num(run, "max_equivariance_gap")));
  }
}

void criterion_closed_form_oracles() {
  BaseSystem sys = BaseSystem::toral(Mat2i{2, 1, 1, 1});
  const std::vector<double> ang{0.17, 0.06, 0.0, 0.03, 0.02};
  auto angle_at = [&](const BasePoint& x) {
    Vec2 uv = sys.chart(x);
    return ang[0] + ang[1] * std::sin(kTwoPi * uv.x) + ang[2] * std::cos(kTwoPi * uv.x) +
           ang[3] * std::sin(kTwoPi * uv.y) + ang[4] * std::cos(kTwoPi * uv.y);
  };
  Json rot = {{"family", "rotation"}, {"params", {{"angle", ang}}}};
  Cocycle a = make_cocycle(rot, sys, 256, 1);
  TruncationSettings ts;
  ts.tol = 1e-12;
  HolonomyComputer hc(a, ts, 0);

  double worst_series = 0.0;
  for (long i = 0; i < 3; ++i) {
    BasePoint y = sys.sample_point(3 * i + 1);
    for (bool stable_side : {true, false}) {
      BasePoint z = stable_side ? sys.leaf_point(std::get<TorusPoint>(y), 0.05, 0.0)
                                : sys.leaf_point(std::get<TorusPoint>(y), 0.0, 0.04);
      HolonomyResult h = stable_side ? hc.stable(y, z) : hc.unstable(y, z);
      long double sum = 0.0L;
      BasePoint fy = y, fz = z;
      for (int k = 0; k < 200; ++k) {
        if (stable_side) {
          sum += static_cast<long double>(angle_at(fy)) - static_cast<long double>(angle_at(fz));
          fy = sys.apply(fy, 1);
          fz = sys.apply(fz, 1);
        } else {
          fy = sys.apply(fy, -1);
          fz = sys.apply(fz, -1);
          sum += static_cast<long double>(angle_at(fz)) - static_cast<long double>(angle_at(fy));
        }
      }
      auto oracle = CircleDiffeo::rotation(static_cast<double>(sum), 256, 1);
      worst_series = std::max(worst_series, d0(h.map, oracle));
    }
  }
  require(worst_series <= 1e-9,
          "rotation series oracle gap " + fmt(worst_series) + " above 1e-9");

  Json sec_spec = {{"family", "shear_field"},
                   {"params", {{"angle", {0.0, 0.07, 0.03}}, {"amp", {0.012, 0.005}}}}};
  auto P0 = make_section(sec_spec, sys, 256, 2);
  Cocycle cob(
      sys,
      [P0, sys](const BasePoint& x) { return compose(P0(sys.apply(x, 1)), P0(x).inverse()); },
      256, 2);
  HolonomyComputer hcb(cob, ts, 0);
  double worst_cob = 0.0;
  for (long i = 0; i < 3; ++i) {
    BasePoint y = sys.sample_point(5 * i + 2);
    for (bool stable_side : {true, false}) {
      BasePoint z = stable_side ? sys.leaf_point(std::get<TorusPoint>(y), 0.06, 0.0)
                                : sys.leaf_point(std::get<TorusPoint>(y), 0.0, 0.05);
      HolonomyResult h = stable_side ? hcb.stable(y, z) : hcb.unstable(y, z);
      auto oracle = compose(P0(z), P0(y).inverse());
      worst_cob = std::max(worst_cob, d0(h.map, oracle));
    }
  }
  require(worst_cob <= 1e-7, "coboundary oracle gap " + fmt(worst_cob) + " above 1e-7");
}

void criterion_closing_lemma() {
  BaseSystem sys = BaseSystem::toral(Mat2i{2, 1, 1, 1});

  // fixed point counts of the n-th power from the trace recurrence
  long tr_prev = 2, tr = 3;  // traces of A^0, A^1
  std::vector<long> expected(9, 0);
  for (int n = 1; n <= 8; ++n) {
    expected[n] = std::labs(2 - tr);
    long next = 3 * tr - tr_prev;
    tr_prev = tr;
    tr = next;
  }
  require(expected[1] == 1 && expected[2] == 5 && expected[3] == 16,
          "trace recurrence disagrees with the pinned counts 1, 5, 16");
  for (int n = 1; n <= 6; ++n) {
    auto pts = sys.periodic_points(n);
    require(static_cast<long>(pts.size()) == expected[n],
            "period " + std::to_string(n) + " count " + std::to_string(pts.size()) +
                " != " + std::to_string(expected[n]));
  }

  for (int n = 3; n <= 8; ++n) {
    auto pts = sys.periodic_points(n);
    const TorusPoint* seed = nullptr;
    for (const auto& p : pts) {
      bool lower = false;
      for (int d = 1; d < n; ++d)
        if (n % d == 0 && sys.same_point(sys.apply(p, d), p)) lower = true;
      if (!lower) {
        seed = &std::get<TorusPoint>(p);
        break;
      }
    }
    require(seed != nullptr, "no primitive orbit of period " + std::to_string(n));
    BasePoint z = sys.leaf_point(*seed, 1e-8, 1e-8);
    ClosingReport rep = sys.closing(z, n);
    require(rep.input_gap <= sys.constants().epsilon0, "closing input gap above epsilon0");
    require(sys.point_key(rep.p) == sys.point_key(sys.apply(rep.p, n)),
            "closing point is not an exact fixed point of the n-th power");
    require(rep.orbit_dist.size() == static_cast<std::size_t>(n + 1),
            "closing must report every orbit step");
    for (std::size_t j = 0; j < rep.orbit_dist.size(); ++j)
      require(rep.orbit_dist[j] <= rep.allowed[j],
              "shadowing bound violated at step " + std::to_string(j) + " for period " +
                  std::to_string(n));
    require(rep.max_ratio <= 1.0, "shadowing ratio above 1 for period " + std::to_string(n));
  }
}

void criterion_periodic_data_vs_routes() {
  const ScenarioRun& poc = get_run("catmap_abelian_poc");
  require(poc.verdict == "pass", "abelian periodic data scenario did not pass");
  require(result_num(poc, "max_gap") <= 1e-10,
          "abelian periodic gap " + fmt(result_num(poc, "max_gap")) + " above 1e-10");
  require(poc.scenario_echo.at("pipeline").at("max_period").get<int>() >= 6,
          "periodic check must reach period 6");

  const ScenarioRun& rig = get_run("catmap_abelian_rigidity");
  require(rig.verdict == "pass", "abelian rigidity scenario did not pass");
  require(result_num(rig, "su_pairs") >= 20, "fewer than 20 homoclinic points compared");
  require(result_num(rig, "su_max_gap") <= 2e-5,
          "route disagreement " + fmt(result_num(rig, "su_max_gap")) + " above 2e-5");

  const ScenarioRun& cex = get_run("catmap_su_poc_counterexample");
  require(cex.verdict == "pass" && cex.observed == "mismatch",
          "counterexample scenario did not end in a detected mismatch");
  require(result_num(cex, "su_max_gap") > 1e-3,
          "counterexample route gap " + fmt(result_num(cex, "su_max_gap")) + " not above 1e-3");
}

void criterion_reconstruction() {
  const ScenarioRun& rec = get_run("catmap_coboundary_reconstruct");
  require(rec.verdict == "pass", "reconstruction scenario did not pass");
  require(result_num(rec, "samples") >= 100, "fewer than 100 evaluation points");
  require(result_num(rec, "max_reference_gap") < 1e-5,
          "reconstructed section is " + fmt(result_num(rec, "max_reference_gap")) +
              " from the conjugator (allowed 1e-5)");
  require(result_num(rec, "max_residual") < 1e-6,
          "cohomology residual " + fmt(result_num(rec, "max_residual")) + " above 1e-6");
  require(rec.elapsed_seconds < 60.0,
          "reconstruction took " + fmt(rec.elapsed_seconds) + "s (budget 60s)");
}

void criterion_period_reduction() {
  const ScenarioRun& red = get_run("sft_no_fixed_point_period2");
  require(red.verdict == "pass", "fixed point free reduction scenario did not pass");
  require(result_num(red, "reduction_power") == 2.0,
          "reduction picked power " + fmt(result_num(red, "reduction_power")) +
              " instead of 2");
  require(result_num(red, "promotion_residual") < 1e-6,
          "promoted one step residual " + fmt(result_num(red, "promotion_residual")) +
              " above 1e-6");
  require(result_num(red, "max_residual") < 1e-6, "double step residual above 1e-6");

  const ScenarioRun& neg = get_run("sft_period2_only_promotion_fail");
  require(neg.observed == "witness_failed" && neg.verdict == "pass",
          "pair cohomologous only over the square must fail its promotion witness");
  require(result_num(neg, "promotion_residual") > 0.1,
          "promotion witness residual " + fmt(result_num(neg, "promotion_residual")) +
              " suspiciously small");
}

void criterion_regularity() {
  const ScenarioRun& reg = get_run("catmap_abelian_regularity");
  require(reg.verdict == "pass", "regularity scenario did not pass");
  require(reg.scenario_echo.at("pipeline").value("scales", 0) >= 6,
          "regularity probe must span at least 6 dyadic scales");
  double h = result_num(reg, "holder_exponent");
  require(h >= 0.85 && h <= 1.15,
          "fitted exponent " + fmt(h) + " outside [0.85, 1.15]");
}

void criterion_domination_gate() {
  for (const char* name : {"catmap_bump_holonomy", "catmap_nondominated_degrade"}) {
    const ScenarioRun& run = get_run(name);
    const Json& dom = run.domination.at("alpha");
    const double rho = dom.at("rho").get<double>();
    const double lam = dom.at("lambda").get<double>();
    const double nu = dom.at("nu").get<double>();
    bool all_orders = true;
    for (const auto& row : dom.at("orders")) {
      double product = std::pow(rho, row.at("exponent").get<double>()) * std::pow(lam, nu);
      require(std::abs(product - row.at("product").get<double>()) <= 1e-12 * (1.0 + product),
              "reported domination product disagrees with its own rho and lambda");
      require(row.at("satisfied").get<bool>() == (product < 1.0),
              std::string(name) + ": satisfied flag must equal product < 1");
      all_orders = all_orders && row.at("satisfied").get<bool>();
    }
    require(dom.at("dominated").get<bool>() == all_orders,
            std::string(name) + ": dominated flag inconsistent with the per order table");
  }

  const ScenarioRun& deg = get_run("catmap_nondominated_degrade");
  require(deg.observed == "degraded" && deg.verdict == "degraded",
          "non dominated scenario was not reported as degraded");
  require(deg.domination.at("alpha").at("dominated").get<bool>() == false,
          "non dominated cocycle reported a positive margin");
  require(result_num(deg, "granted_order") == 0.0,
          "jet certificate granted without domination");
  const CheckRow* silent = find_check(deg, "no_silent_certification");
  require(silent != nullptr && silent->passed,
          "degraded run claimed a jet order above its certificate");
}

}  // namespace

int main() {
  struct Entry {
    const char* label;
    std::function<void()> fn;
  };
  const std::vector<Entry> criteria{
      {"1 holonomy contraction inside the growth envelope, under 5s per transport at grid 2048",
       criterion_contraction_and_speed},
      {"2 composition and equivariance at 1e-6 over 50+ triples per dominated scenario",
       criterion_holonomy_identities},
      {"3 rotation series oracle at 1e-9 and coboundary quotient oracle at 1e-7",
       criterion_closed_form_oracles},
      {"4 exact rational closing orbits with shadowing bounds, counts 1/5/16",
       criterion_closing_lemma},
      {"5 periodic data at 1e-10, route agreement at 2e-5, counterexample above 1e-3",
       criterion_periodic_data_vs_routes},
      {"6 section reconstruction within 1e-5 of the conjugator, residual 1e-6, under 60s",
       criterion_reconstruction},
      {"7 period reduction and promotion on a fixed point free shift, negative pair refused",
       criterion_period_reduction},
      {"8 empirical Holder exponent of the abelian transfer in [0.85, 1.15]",
       criterion_regularity},
      {"9 domination verdicts consistent with their own numbers, degrade never silent",
       criterion_domination_gate},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    try {
      c.fn();
      std::printf("[PASS] %s\n", c.label);
    } catch (const std::exception& e) {
      ++failures;
      std::printf("[FAIL] %s: %s\n", c.label, e.what());
    }
    std::fflush(stdout);
  }
  if (failures) std::printf("%d of 9 acceptance criteria failed\n", failures);
  else std::printf("all 9 acceptance criteria passed\n");
  return failures == 0 ? 0 : 1;
}
