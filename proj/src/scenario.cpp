#include "holocycle/scenario.hpp"

#include <cmath>
#include <sstream>

#include "holocycle/errors.hpp"

namespace holocycle {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<double> coeffs_from(const Json& j, const char* key) {
  std::vector<double> c(7, 0.0);
  if (!j.contains(key)) return c;
  const Json& arr = j.at(key);
  if (!arr.is_array() || arr.size() > 7)
    throw ConfigInvalid(std::string(key) + " must be an array of at most 7 numbers");
  for (std::size_t i = 0; i < arr.size(); ++i) c[i] = arr[i].get<double>();
  return c;
}

// feature basis over the chart: constant, periodic waves, raw coordinates
double field_value(const std::vector<double>& c, const Vec2& uv) {
  return c[0] + c[1] * std::sin(kTwoPi * uv.x) + c[2] * std::cos(kTwoPi * uv.x) +
         c[3] * std::sin(kTwoPi * uv.y) + c[4] * std::cos(kTwoPi * uv.y) + c[5] * uv.x +
         c[6] * uv.y;
}

CircleDiffeo shear_diffeo(double angle, double amp, int grid, int order) {
  if (std::fabs(amp) > 0.145)
    throw ConfigInvalid("shear amplitude must stay below 0.145 to keep a diffeo");
  std::vector<std::function<double(double)>> jets;
  jets.push_back([angle, amp](double t) { return t + angle + amp * std::sin(kTwoPi * t); });
  jets.push_back([amp](double t) { return 1.0 + amp * kTwoPi * std::cos(kTwoPi * t); });
  jets.push_back([amp](double t) { return -amp * kTwoPi * kTwoPi * std::sin(kTwoPi * t); });
  jets.push_back(
      [amp](double t) { return -amp * kTwoPi * kTwoPi * kTwoPi * std::cos(kTwoPi * t); });
  jets.push_back(
      [amp](double t) { return amp * kTwoPi * kTwoPi * kTwoPi * kTwoPi * std::sin(kTwoPi * t); });
  jets.resize(static_cast<std::size_t>(order) + 1 <= jets.size()
                  ? static_cast<std::size_t>(order) + 1
                  : jets.size());
  return CircleDiffeo::from_lift_jets(jets, grid, std::min<int>(order, 4));
}

}  // namespace

BaseSystem make_system(const Json& spec) {
  if (!spec.is_object() || !spec.contains("type"))
    throw ConfigInvalid("base description needs a type");
  std::string type = spec.at("type").get<std::string>();
  BaseSystem sys;
  if (type == "toral") {
    const Json& m = spec.at("matrix");
    if (!m.is_array() || m.size() != 2 || m[0].size() != 2 || m[1].size() != 2)
      throw ConfigInvalid("toral matrix must be 2x2");
    Mat2i A{m[0][0].get<long long>(), m[0][1].get<long long>(), m[1][0].get<long long>(),
            m[1][1].get<long long>()};
    sys = BaseSystem::toral(A);
  } else if (type == "sft") {
    std::vector<std::vector<int>> T;
    for (const Json& row : spec.at("transition")) T.push_back(row.get<std::vector<int>>());
    double base = spec.value("metric_base", 0.5);
    sys = BaseSystem::sft(T, base);
  } else {
    throw ConfigInvalid("unknown base type '" + type + "'");
  }
  if (spec.contains("constants")) {
    HyperbolicConstants c = sys.constants();
    const Json& jc = spec.at("constants");
    if (jc.contains("C1")) c.C1 = jc.at("C1").get<double>();
    if (jc.contains("lambda")) c.lambda = jc.at("lambda").get<double>();
    if (jc.contains("epsilon")) c.epsilon = jc.at("epsilon").get<double>();
    if (jc.contains("tau")) c.tau = jc.at("tau").get<double>();
    if (jc.contains("epsilon0")) c.epsilon0 = jc.at("epsilon0").get<double>();
    if (jc.contains("C5")) c.C5 = jc.at("C5").get<double>();
    if (jc.contains("theta")) c.theta = jc.at("theta").get<double>();
    sys = sys.with_constants(c);
  }
  return sys;
}

BasePoint parse_point(const Json& spec, const BaseSystem& sys) {
  if (spec.is_string() && spec.get<std::string>() == "fixed_point") {
    auto pts = sys.periodic_points(1);
    if (pts.empty()) throw ConfigInvalid("system has no fixed point to anchor at");
    return pts.front();
  }
  if (spec.is_object() && spec.contains("views")) {
    if (!sys.is_toral()) throw ConfigInvalid("view coordinates need a toral base");
    return sys.point_from_views(spec.at("views")[0].get<double>(),
                                spec.at("views")[1].get<double>());
  }
  if (spec.is_object() && spec.contains("rationals")) {
    if (!sys.is_toral()) throw ConfigInvalid("rational coordinates need a toral base");
    Rational x(spec.at("rationals")[0].get<std::string>());
    Rational y(spec.at("rationals")[1].get<std::string>());
    return sys.point_from_rationals(x, y);
  }
  if (spec.is_object() && spec.contains("word")) {
    if (sys.is_toral()) throw ConfigInvalid("symbol words need a subshift base");
    Word w = spec.at("word").get<Word>();
    return sys.validated(SymbolPoint::periodic(w));
  }
  if (spec.is_object() && spec.contains("sample_index"))
    return sys.sample_point(spec.at("sample_index").get<long>());
  throw ConfigInvalid("unrecognized point description");
}

std::function<CircleDiffeo(const BasePoint&)> make_section(const Json& spec,
                                                           const BaseSystem& sys, int grid,
                                                           int jet_order) {
  if (!spec.is_object() || !spec.contains("family"))
    throw ConfigInvalid("section description needs a family");
  std::string family = spec.at("family").get<std::string>();
  Json params = spec.value("params", Json::object());
  if (family == "rotation_field") {
    auto angle = coeffs_from(params, "angle");
    return [angle, sys, grid, jet_order](const BasePoint& x) {
      return CircleDiffeo::rotation(field_value(angle, sys.chart(x)), grid, jet_order);
    };
  }
  if (family == "shear_field") {
    auto angle = coeffs_from(params, "angle");
    auto amp = coeffs_from(params, "amp");
    return [angle, amp, sys, grid, jet_order](const BasePoint& x) {
      Vec2 uv = sys.chart(x);
      return shear_diffeo(field_value(angle, uv), field_value(amp, uv), grid, jet_order);
    };
  }
  if (family == "normalized") {
    auto inner = make_section(params.at("inner"), sys, grid, jet_order);
    BasePoint anchor = parse_point(params.at("anchor"), sys);
    CircleDiffeo at_anchor_inv = inner(anchor).inverse();
    return [inner, at_anchor_inv](const BasePoint& x) {
      return compose(inner(x), at_anchor_inv);
    };
  }
  throw ConfigInvalid("unknown section family '" + family + "'");
}

Cocycle make_cocycle(const Json& gen, const BaseSystem& sys, int grid, int order) {
  if (!gen.is_object() || !gen.contains("family"))
    throw ConfigInvalid("generator description needs a family");
  std::string family = gen.at("family").get<std::string>();
  Json params = gen.value("params", Json::object());

  if (family == "rotation") {
    auto angle = coeffs_from(params, "angle");
    return Cocycle(
        sys,
        [angle, sys, grid, order](const BasePoint& x) {
          return CircleDiffeo::rotation(field_value(angle, sys.chart(x)), grid, order);
        },
        grid, order);
  }
  if (family == "shear") {
    auto angle = coeffs_from(params, "angle");
    auto amp = coeffs_from(params, "amp");
    return Cocycle(
        sys,
        [angle, amp, sys, grid, order](const BasePoint& x) {
          Vec2 uv = sys.chart(x);
          return shear_diffeo(field_value(angle, uv), field_value(amp, uv), grid, order);
        },
        grid, order);
  }
  if (family == "abelian_partner") {
    auto angle = coeffs_from(params, "angle");
    auto psi = coeffs_from(params, "psi");
    return Cocycle(
        sys,
        [angle, psi, sys, grid, order](const BasePoint& x) {
          Vec2 uv = sys.chart(x);
          Vec2 uvf = sys.chart(sys.apply(x, 1));
          double a = field_value(angle, uv) - field_value(psi, uvf) + field_value(psi, uv);
          return CircleDiffeo::rotation(a, grid, order);
        },
        grid, order);
  }
  if (family == "offset_of") {
    Cocycle inner = make_cocycle(params.at("inner"), sys, grid, order);
    double offset = params.at("offset").get<double>();
    return Cocycle(
        sys,
        [inner, offset, grid, order](const BasePoint& x) {
          return compose(CircleDiffeo::rotation(offset, grid, order), inner.at(x));
        },
        grid, order);
  }
  if (family == "conjugated") {
    Cocycle inner = make_cocycle(params.at("inner"), sys, grid, order);
    auto section = make_section(params.at("conjugator"), sys, grid, order);
    return Cocycle(
        sys,
        [inner, section, sys](const BasePoint& x) {
          CircleDiffeo pf = section(sys.apply(x, 1));
          return CircleDiffeo::compose3(pf.inverse(), inner.at(x), section(x));
        },
        grid, order);
  }
  throw ConfigInvalid("unknown generator family '" + family + "'");
}

ScenarioConfig ScenarioConfig::from_json(const Json& j) {
  ScenarioConfig sc;
  if (!j.is_object()) throw ConfigInvalid("scenario must be a JSON object");
  static const char* kKnownKeys[] = {"name",  "title", "description", "expect", "budget_seconds",
                                     "base",  "fiber", "alpha",       "beta",   "reference",
                                     "pipeline", "seed", "output"};
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : kKnownKeys) known = known || item.key() == k;
    if (!known) throw ConfigInvalid("unknown scenario field '" + item.key() + "'");
  }

  sc.name = j.value("name", "");
  if (sc.name.empty()) throw ConfigInvalid("scenario needs a name");
  for (char ch : sc.name)
    if (!(std::islower(static_cast<unsigned char>(ch)) ||
          std::isdigit(static_cast<unsigned char>(ch)) || ch == '_'))
      throw ConfigInvalid("scenario names use lowercase, digits and underscores only");
  sc.title = j.value("title", sc.name);
  sc.description = j.value("description", "");
  sc.budget_seconds = j.value("budget_seconds", 120.0);
  if (!(sc.budget_seconds > 0)) throw ConfigInvalid("budget_seconds must be positive");

  if (!j.contains("pipeline")) throw ConfigInvalid("scenario needs a pipeline");
  const Json& pl = j.at("pipeline");
  if (pl.is_string()) {
    sc.pipeline = pl.get<std::string>();
  } else if (pl.is_object() && pl.contains("name")) {
    sc.pipeline = pl.at("name").get<std::string>();
    sc.params = pl;
    sc.params.erase("name");
  } else {
    throw ConfigInvalid("pipeline must be a name or an object with a name");
  }
  static const char* kPipelines[] = {"holonomy-verify", "poc-check", "reconstruct",
                                     "rigidity-full", "regularity-probe"};
  bool known_pipeline = false;
  for (const char* p : kPipelines) known_pipeline = known_pipeline || sc.pipeline == p;
  if (!known_pipeline) throw ConfigInvalid("unknown pipeline '" + sc.pipeline + "'");
  for (const auto& item : sc.params.items()) {
    const std::string& key = item.key();
    bool is_tol = key.rfind("tol", 0) == 0 ||
                  (key.size() > 4 && key.compare(key.size() - 4, 4, "_tol") == 0);
    if (is_tol && !(item.value().is_number() && item.value().get<double>() > 0))
      throw ConfigInvalid("tolerance '" + key + "' must be a positive number");
    static const char* kCounts[] = {"samples",     "triples",    "homoclinic_count",
                                    "max_period",  "max_reduce", "scales",
                                    "anchors",     "poc_period"};
    for (const char* ck : kCounts)
      if (key == ck && !(item.value().is_number_integer() && item.value().get<long>() >= 1))
        throw ConfigInvalid("count '" + key + "' must be an integer >= 1");
  }

  sc.expect = j.value("expect", "pass");
  static const char* kExpected[] = {"pass", "obstruction", "mismatch", "witness_failed",
                                    "degraded"};
  bool ok = false;
  for (const char* e : kExpected) ok = ok || sc.expect == e;
  if (!ok) throw ConfigInvalid("unknown expectation '" + sc.expect + "'");

  if (!j.contains("base")) throw ConfigInvalid("scenario needs a base system");
  sc.base = j.at("base");
  if (!j.contains("alpha")) throw ConfigInvalid("scenario needs an alpha generator");
  sc.alpha = j.at("alpha");
  if (j.contains("beta")) sc.beta = j.at("beta");
  if (j.contains("reference")) sc.reference = j.at("reference");

  Json fiber = j.value("fiber", Json::object());
  if (!fiber.is_object()) throw ConfigInvalid("fiber must be an object");
  sc.grid_size = fiber.value("grid_size", 2048);
  sc.jet_order = fiber.value("jet_order", 3);
  if (sc.jet_order < 1 || sc.jet_order > 6)
    throw ConfigInvalid("fiber jet_order must be between 1 and 6");
  if (sc.grid_size < 8 || (sc.grid_size & (sc.grid_size - 1)) != 0)
    throw ConfigInvalid("fiber grid_size must be a power of two, at least 8");

  sc.seed = j.value("seed", 0L);
  if (sc.seed < 0) throw ConfigInvalid("seed must be non-negative");
  sc.output = j.value("output", "");
  return sc;
}

Json ScenarioConfig::to_json() const {
  Json j;
  j["name"] = name;
  j["title"] = title;
  if (!description.empty()) j["description"] = description;
  j["expect"] = expect;
  j["budget_seconds"] = budget_seconds;
  j["base"] = base;
  j["fiber"] = Json{{"grid_size", grid_size}, {"jet_order", jet_order}};
  j["alpha"] = alpha;
  if (!beta.is_null()) j["beta"] = beta;
  if (!reference.is_null()) j["reference"] = reference;
  Json pl = params;
  pl["name"] = pipeline;
  j["pipeline"] = pl;
  j["seed"] = seed;
  if (!output.empty()) j["output"] = output;
  return j;
}

void apply_override(Json& config, const std::string& dotted_key, const std::string& value) {
  if (dotted_key.empty()) throw ConfigInvalid("override key must not be empty");
  Json* cur = &config;
  std::stringstream ss(dotted_key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ConfigInvalid("override key has an empty segment");
    parts.push_back(part);
  }
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!cur->is_object()) throw ConfigInvalid("override path crosses a non-object");
    cur = &(*cur)[parts[i]];
  }
  if (!cur->is_object()) throw ConfigInvalid("override path crosses a non-object");
  Json parsed = Json::parse(value, nullptr, false);
  (*cur)[parts.back()] = parsed.is_discarded() ? Json(value) : parsed;
}

}  // namespace holocycle
