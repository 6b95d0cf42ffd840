#include "holocycle/bundled_scenarios.hpp"

namespace holocycle {

namespace {

// Each entry is a complete scenario document.  Keeping them as JSON text means
// the compiled-in catalog, the files under scenarios/, and anything a user
// writes by hand all go through the same validation path.
const char* const kScenarioTexts[] = {

    R"json({
  "name": "catmap_bump_holonomy",
  "title": "Dominated shear holonomies over the cat map",
  "description": "Small sinusoidal shear cocycle over the [[2,1],[1,1]] torus automorphism. Verifies stable and unstable holonomies: contraction stays inside the envelope predicted by the measured growth rates, transports compose along leaves, and conjugating by the dynamics maps one holonomy to the next.",
  "expect": "pass",
  "budget_seconds": 120,
  "base": {"type": "toral", "matrix": [[2, 1], [1, 1]]},
  "fiber": {"grid_size": 512, "jet_order": 3},
  "alpha": {"family": "shear", "params": {"angle": [0.13, 0.05, 0.03, 0.04], "amp": [0.008, 0.004, 0.0, 0.003]}},
  "pipeline": {"name": "holonomy-verify", "triples": 50, "tol_composition": 1e-6, "tol_equivariance": 1e-6, "truncation_tol": 3e-8},
  "seed": 1
})json",

    R"json({
  "name": "sft_full2_rotation_holonomy",
  "title": "Rotation cocycle holonomies over the full 2-shift",
  "description": "Rotation-valued cocycle whose angle depends on the symbolic past and future through the standard chart of the full shift on two symbols. Holonomies reduce to convergent angle series, so this doubles as an end-to-end consistency run on a non-toral base.",
  "expect": "pass",
  "budget_seconds": 120,
  "base": {"type": "sft", "transition": [[1, 1], [1, 1]], "metric_base": 0.5},
  "fiber": {"grid_size": 256, "jet_order": 3},
  "alpha": {"family": "rotation", "params": {"angle": [0.21, 0.13, 0.0, 0.08, 0.05]}},
  "pipeline": {"name": "holonomy-verify", "triples": 50, "truncation_tol": 1e-9},
  "seed": 2
})json",

    R"json({
  "name": "catmap_nondominated_degrade",
  "title": "Large shear without domination falls back to topological holonomies",
  "expect": "degraded",
  "description": "Shear amplitudes large enough that the measured fiber growth rate defeats every jet-level domination margin. The jet certificate must be refused up front and the holonomies recomputed at the topological level; claiming any differentiable certificate here would be wrong.",
  "budget_seconds": 120,
  "base": {"type": "toral", "matrix": [[2, 1], [1, 1]]},
  "fiber": {"grid_size": 1024, "jet_order": 3},
  "alpha": {"family": "shear", "params": {"angle": [0.11, 0.04], "amp": [0.1, 0.02]}},
  "pipeline": {"name": "holonomy-verify", "triples": 12},
  "seed": 3
})json",

    R"json({
  "name": "catmap_abelian_poc",
  "title": "Periodic orbit rotation numbers agree for an abelian coboundary pair",
  "description": "Rotation cocycle paired with the same angles twisted by a smooth potential difference. Every periodic orbit up to period six must give identical rotation numbers for the two return maps, to within the exact-rotation tolerance.",
  "expect": "pass",
  "budget_seconds": 60,
  "base": {"type": "toral", "matrix": [[2, 1], [1, 1]]},
  "fiber": {"grid_size": 256, "jet_order": 1},
  "alpha": {"family": "rotation", "params": {"angle": [0.15, 0.07, 0.02, 0.04, 0.01]}},
  "beta": {"family": "abelian_partner", "params": {"angle": [0.15, 0.07, 0.02, 0.04, 0.01], "psi": [0.0, 0.05, 0.08, 0.03, 0.02]}},
  "pipeline": {"name": "poc-check", "max_period": 6, "tol_match": 1e-10},
  "seed": 4
})json",

    R"json({
  "name": "catmap_poc_violation",
  "title": "Constant drift makes every periodic obstruction visible",
  "description": "Same rotation cocycle against a copy offset by a fixed angle of 0.21 per step. Periodic rotation numbers then differ by period times the offset, so the periodic obstruction check must report a violation rather than a match.",
  "expect": "obstruction",
  "budget_seconds": 60,
  "base": {"type": "toral", "matrix": [[2, 1], [1, 1]]},
  "fiber": {"grid_size": 256, "jet_order": 1},
  "alpha": {"family": "rotation", "params": {"angle": [0.15, 0.07, 0.02, 0.04, 0.01]}},
  "beta": {"family": "offset_of", "params": {"offset": 0.21, "inner": {"family": "rotation", "params": {"angle": [0.15, 0.07, 0.02, 0.04, 0.01]}}}},
  "pipeline": {"name": "poc-check", "max_period": 4, "violation_gap": 0.01},
  "seed": 5
})json",

    R"json({
  "name": "catmap_rotation_livsic",
  "title": "Reconstruction of the transfer section for an abelian pair",
  "description": "The partner cocycle differs from the rotation cocycle by the coboundary of a smooth angle field, so the transfer section is the corresponding rotation field normalized at the fixed point. Reconstruction through holonomy transport must reproduce it with residual below 1e-6 and agree between stable-first and unstable-first routes.",
  "expect": "pass",
  "budget_seconds": 120,
  "base": {"type": "toral", "matrix": [[2, 1], [1, 1]]},
  "fiber": {"grid_size": 512, "jet_order": 3},
  "alpha": {"family": "rotation", "params": {"angle": [0.17, 0.06, 0.0, 0.03, 0.02]}},
  "beta": {"family": "abelian_partner", "params": {"angle": [0.17, 0.06, 0.0, 0.03, 0.02], "psi": [0.0, 0.04, 0.06, 0.02, 0.03]}},
  "reference": {"family": "normalized", "params": {"anchor": "fixed_point", "inner": {"family": "rotation_field", "params": {"angle": [0.0, 0.04, 0.06, 0.02, 0.03]}}}},
  "pipeline": {"name": "reconstruct", "samples": 100, "tol_residual": 1e-6, "tol_reference": 1e-5, "poc_period": 4, "tol_poc": 1e-9},
  "seed": 6
})json",

    R"json({
  "name": "catmap_coboundary_reconstruct",
  "title": "Recovering a known conjugating section for a shear pair",
  "description": "The second cocycle is the first conjugated by an explicit section of circle maps. Anchored at that section's value at the fixed point, transport must hand back the section itself everywhere: small residual, small gap to the reference, and agreement between transport routes.",
  "expect": "pass",
  "budget_seconds": 120,
  "base": {"type": "toral", "matrix": [[2, 1], [1, 1]]},
  "fiber": {"grid_size": 512, "jet_order": 3},
  "alpha": {"family": "shear", "params": {"angle": [0.12, 0.05, 0.02], "amp": [0.008, 0.004, 0.0, 0.003]}},
  "beta": {"family": "conjugated", "params": {"inner": {"family": "shear", "params": {"angle": [0.12, 0.05, 0.02], "amp": [0.008, 0.004, 0.0, 0.003]}}, "conjugator": {"family": "shear_field", "params": {"angle": [0.0, 0.06, 0.04], "amp": [0.012, 0.005]}}}},
  "reference": {"family": "shear_field", "params": {"angle": [0.0, 0.06, 0.04], "amp": [0.012, 0.005]}},
  "pipeline": {"name": "reconstruct", "samples": 100, "tol_residual": 1e-6, "tol_reference": 1e-5, "poc_period": 3, "tol_poc": 5e-5},
  "seed": 7
})json",

    R"json({
  "name": "catmap_abelian_rigidity",
  "title": "Full rigidity run for an abelian pair anchored at the fixed point",
  "description": "Periodic rotation numbers match exactly, stable-route and unstable-route transfer values agree at twenty homoclinic points of the fixed point, and the reconstructed section satisfies the intertwining equation at sampled points.",
  "expect": "pass",
  "budget_seconds": 120,
  "base": {"type": "toral", "matrix": [[2, 1], [1, 1]]},
  "fiber": {"grid_size": 512, "jet_order": 3},
  "alpha": {"family": "rotation", "params": {"angle": [0.19, 0.05, 0.03, 0.02]}},
  "beta": {"family": "abelian_partner", "params": {"angle": [0.19, 0.05, 0.03, 0.02], "psi": [0.0, 0.06, 0.03, 0.05]}},
  "pipeline": {"name": "rigidity-full", "homoclinic_count": 20, "tol_su": 2e-5, "tol_poc": 1e-10, "poc_period": 3, "samples": 40, "tol_residual": 1e-6},
  "seed": 8
})json",

    R"json({
  "name": "catmap_su_poc_counterexample",
  "title": "Route disagreement for a pair that is not cohomologous",
  "description": "A position-dependent rotation cocycle against the constant rotation with the same mean angle. No transfer section exists; transporting the anchor value along stable and unstable routes to the same homoclinic point must produce visibly different circle maps.",
  "expect": "mismatch",
  "budget_seconds": 120,
  "base": {"type": "toral", "matrix": [[2, 1], [1, 1]]},
  "fiber": {"grid_size": 512, "jet_order": 3},
  "alpha": {"family": "rotation", "params": {"angle": [0.2, 0.12, 0.0, 0.07]}},
  "beta": {"family": "rotation", "params": {"angle": [0.2]}},
  "pipeline": {"name": "rigidity-full", "homoclinic_count": 20, "su_violation": 1e-3, "poc_period": 3},
  "seed": 9
})json",

    R"json({
  "name": "sft_no_fixed_point_period2",
  "title": "Period reduction and promotion on a subshift without fixed points",
  "description": "Three-symbol subshift whose transition matrix has an empty diagonal, so the reduction step must pass to the square of the shift before anchoring at a period-two point. The conjugated pair is reconstructed over the square and the section then promoted back to the one-step cocycles, with the one-step residual checked at leg endpoints of the connecting path and at generic points.",
  "expect": "pass",
  "budget_seconds": 180,
  "base": {"type": "sft", "transition": [[0, 1, 1], [1, 0, 1], [1, 1, 0]], "metric_base": 0.5},
  "fiber": {"grid_size": 512, "jet_order": 3},
  "alpha": {"family": "shear", "params": {"angle": [0.11, 0.05, 0.0, 0.04], "amp": [0.02, 0.01]}},
  "beta": {"family": "conjugated", "params": {"inner": {"family": "shear", "params": {"angle": [0.11, 0.05, 0.0, 0.04], "amp": [0.02, 0.01]}}, "conjugator": {"family": "shear_field", "params": {"angle": [0.0, 0.05, 0.03], "amp": [0.015, 0.008]}}}},
  "reference": {"family": "shear_field", "params": {"angle": [0.0, 0.05, 0.03], "amp": [0.015, 0.008]}},
  "pipeline": {"name": "rigidity-full", "poc_period": 2, "tol_poc": 5e-5, "homoclinic_count": 12, "tol_su": 2e-5, "samples": 24, "tol_residual": 1e-6, "tol_promote": 1e-6},
  "seed": 10
})json",

    R"json({
  "name": "sft_period2_only_promotion_fail",
  "title": "Cohomologous over the square of the shift but not over the shift itself",
  "description": "Adding a half-turn per step cancels over any even number of steps, so the pair agrees exactly over the square of the shift and every period-two check passes. Promotion back to one step must then fail loudly: the one-step residual at every witness point is one half.",
  "expect": "witness_failed",
  "budget_seconds": 120,
  "base": {"type": "sft", "transition": [[0, 1, 1], [1, 0, 1], [1, 1, 0]], "metric_base": 0.5},
  "fiber": {"grid_size": 256, "jet_order": 1},
  "alpha": {"family": "rotation", "params": {"angle": [0.13, 0.06, 0.0, 0.05]}},
  "beta": {"family": "offset_of", "params": {"offset": 0.5, "inner": {"family": "rotation", "params": {"angle": [0.13, 0.06, 0.0, 0.05]}}}},
  "pipeline": {"name": "rigidity-full", "poc_period": 2, "tol_poc": 1e-9, "homoclinic_count": 10, "tol_su": 2e-5, "samples": 16, "promote_violation": 0.1},
  "seed": 11
})json",

    R"json({
  "name": "catmap_abelian_regularity",
  "title": "Hoelder scan of the reconstructed section along leaves",
  "description": "For the abelian pair the reconstructed section varies smoothly with the base point, so finite differences along stable, unstable, and diagonal displacements at six dyadic scales must fit a log-log slope close to one.",
  "expect": "pass",
  "budget_seconds": 120,
  "base": {"type": "toral", "matrix": [[2, 1], [1, 1]]},
  "fiber": {"grid_size": 512, "jet_order": 3},
  "alpha": {"family": "rotation", "params": {"angle": [0.16, 0.08, 0.04, 0.05, 0.02]}},
  "beta": {"family": "abelian_partner", "params": {"angle": [0.16, 0.08, 0.04, 0.05, 0.02], "psi": [0.0, 0.07, 0.05, 0.04, 0.02]}},
  "pipeline": {"name": "regularity-probe", "scales": 6, "anchors": 5, "base_scale": 0.04, "exponent_lo": 0.85, "exponent_hi": 1.15},
  "seed": 12
})json",

    R"json({
  "name": "catmap_coboundary_jets",
  "title": "Jet-level agreement with a known conjugating section",
  "description": "The reconstructed section is compared against the explicit conjugator not just in the uniform metric but through first-order jets, at a certificate order granted by the measured domination margins. The leafwise Hoelder scan must still fit a slope close to one.",
  "expect": "pass",
  "budget_seconds": 120,
  "base": {"type": "toral", "matrix": [[2, 1], [1, 1]]},
  "fiber": {"grid_size": 512, "jet_order": 3},
  "alpha": {"family": "shear", "params": {"angle": [0.1, 0.04, 0.02], "amp": [0.008, 0.004]}},
  "beta": {"family": "conjugated", "params": {"inner": {"family": "shear", "params": {"angle": [0.1, 0.04, 0.02], "amp": [0.008, 0.004]}}, "conjugator": {"family": "shear_field", "params": {"angle": [0.0, 0.05], "amp": [0.006, 0.003]}}}},
  "reference": {"family": "shear_field", "params": {"angle": [0.0, 0.05], "amp": [0.006, 0.003]}},
  "pipeline": {"name": "regularity-probe", "cert_order": 1, "samples": 16, "scales": 5, "anchors": 4, "base_scale": 0.04, "tol_reference": 1e-5, "tol_jets": 2e-3, "tol_residual": 1e-6, "exponent_lo": 0.85, "exponent_hi": 1.15},
  "seed": 13
})json",

};

std::vector<ScenarioConfig> parse_all() {
  std::vector<ScenarioConfig> out;
  for (const char* text : kScenarioTexts)
    out.push_back(ScenarioConfig::from_json(Json::parse(text)));
  return out;
}

}  // namespace

const std::vector<ScenarioConfig>& bundled_scenarios() {
  static const std::vector<ScenarioConfig> all = parse_all();
  return all;
}

const ScenarioConfig* find_bundled_scenario(const std::string& name) {
  for (const auto& sc : bundled_scenarios()) {
    if (sc.name == name) return &sc;
  }
  return nullptr;
}

}  // namespace holocycle
