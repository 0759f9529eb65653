#include "commands.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <optional>

#include "constructions.hpp"
#include "curves.hpp"
#include "error.hpp"
#include "extended.hpp"
#include "gradients.hpp"
#include "instances.hpp"
#include "sobolev.hpp"

namespace mmgrad {

namespace {

using io::Json;

class Request {
 public:
  explicit Request(const Json& j) : j_(j) {
    if (!j_.is_object()) throw Error(ErrorCode::Parse, "request must be a JSON object");
  }

  const MetricMeasureSpace& space() {
    if (!space_) {
      if (!j_.contains("space")) throw Error(ErrorCode::InvalidArgument, "this command needs a space");
      space_.emplace(io::parse_space(j_.at("space")));
    }
    return *space_;
  }

  bool has_field(const std::string& name) const {
    return j_.contains("fields") && j_.at("fields").is_object() && j_.at("fields").contains(name);
  }

  /// First present name wins.
  Field field(std::initializer_list<const char*> names) {
    for (const char* name : names) {
      if (has_field(name)) return io::parse_field(space(), j_.at("fields").at(name));
    }
    throw Error(ErrorCode::InvalidArgument, std::string("missing field '") + *names.begin() + "'");
  }

  const Json& raw_field(const char* name) {
    if (!has_field(name)) throw Error(ErrorCode::InvalidArgument, std::string("missing field '") + name + "'");
    return j_.at("fields").at(name);
  }

  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  double number(const char* key, std::optional<double> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw Error(ErrorCode::InvalidArgument, std::string("missing parameter '") + key + "'");
    }
    const Json& v = j_.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "+inf")) return kInf;
    throw Error(ErrorCode::Parse, std::string("parameter '") + key + "' must be a number");
  }

  std::string text(const char* key, std::optional<std::string> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw Error(ErrorCode::InvalidArgument, std::string("missing parameter '") + key + "'");
    }
    const Json& v = j_.at(key);
    if (!v.is_string()) throw Error(ErrorCode::Parse, std::string("parameter '") + key + "' must be a string");
    return v.get<std::string>();
  }

  std::vector<std::string> strings(const char* key) const {
    std::vector<std::string> out;
    if (!has(key)) return out;
    const Json& v = j_.at(key);
    if (!v.is_array()) throw Error(ErrorCode::Parse, std::string("parameter '") + key + "' must be a list");
    for (const Json& s : v) {
      if (!s.is_string()) throw Error(ErrorCode::Parse, std::string("parameter '") + key + "' must list strings");
      out.push_back(s.get<std::string>());
    }
    return out;
  }

  bool flag(const char* key) const {
    if (!has(key)) return false;
    const Json& v = j_.at(key);
    if (!v.is_boolean()) throw Error(ErrorCode::Parse, std::string("parameter '") + key + "' must be a boolean");
    return v.get<bool>();
  }

  CurveFamily family(const std::string& fallback) {
    if (has("curves") && j_.at("curves").is_object()) return io::parse_family(space(), j_.at("curves"));
    return enumerate_family(space(), FamilyPolicy::parse(text("curves", fallback)), curve_cap());
  }

  FamilyPolicy policy(const std::string& fallback) const { return FamilyPolicy::parse(text("curves", fallback)); }

  std::size_t curve_cap() const {
    const double cap = number("curve_cap", static_cast<double>(kDefaultCurveCap));
    if (!(cap >= 1.0)) throw Error(ErrorCode::ParameterRange, "curve_cap must be >= 1");
    return static_cast<std::size_t>(cap);
  }

  std::optional<Cover> cover() {
    if (has("cover")) return io::parse_cover(space(), j_.at("cover"));
    if (has("cover_radius")) {
      const double r = number("cover_radius");
      if (!(r > 0.0)) throw Error(ErrorCode::ParameterRange, "cover_radius must be positive");
      return ball_cover(space(), r);
    }
    return std::nullopt;
  }

  Cover required_cover() {
    auto c = cover();
    if (!c) throw Error(ErrorCode::InvalidArgument, "this command needs a cover or cover_radius");
    return *c;
  }

 private:
  const Json& j_;
  std::optional<MetricMeasureSpace> space_;
};

Json stats_json(const solver::SolverStats& s) {
  return {{"method", s.method},
          {"iterations", s.iterations},
          {"rounds", s.rounds},
          {"converged", s.converged},
          {"kkt_residual", s.kkt_residual}};
}

Json pair_report_json(const MetricMeasureSpace& space, const ViolationReport& r, const Field& u, const Field& g) {
  Json j{{"passed", r.passed}, {"worst_ratio", io::value_to_json(r.worst_ratio)}, {"checked_count", r.checked_count}};
  if (r.witness == ViolationReport::Witness::Pair) {
    j["witness"] = {{"x", space.id(r.x)},
                    {"y", space.id(r.y)},
                    {"distance", space.distance(r.x, r.y)},
                    {"u_difference", io::value_to_json(std::abs(u[r.x] - u[r.y]))},
                    {"g_sum", io::value_to_json(g[r.x] + g[r.y])}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Json curve_report_json(const MetricMeasureSpace& space, const ViolationReport& r, const Field& u, const Field& g,
                       const CurveFamily& family) {
  Json j{{"passed", r.passed},
         {"worst_ratio", io::value_to_json(r.worst_ratio)},
         {"checked_count", r.checked_count},
         {"family_size", family.curves.size()}};
  if (r.witness == ViolationReport::Witness::Curve) {
    const Curve& c = family.curves[r.curve];
    j["witness"] = {{"curve", io::ids_to_json(space, c.vertices)},
                    {"u_difference", io::value_to_json(std::abs(u[c.end()] - u[c.start()]))},
                    {"integral", io::value_to_json(line_integral(g, c))}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Json level_json(const MetricMeasureSpace& space, const LevelRecord& lv) {
  return {{"k", lv.k},
          {"level_set", io::ids_to_json(space, lv.level_set)},
          {"extension", io::field_to_json(space, lv.extension)},
          {"truncated_gradient", io::field_to_json(space, lv.truncated_gradient)},
          {"nested", lv.nested},
          {"extension_matches", lv.extension_matches},
          {"strong_ratio", io::value_to_json(lv.strong_ratio)},
          {"edge_ratio", io::value_to_json(lv.edge_ratio)}};
}

Json certificate_json(const MetricMeasureSpace& space, const ConversionCertificate& c, bool with_levels) {
  Json j{{"passed", c.passed()},
         {"levels_ok", c.levels_ok()},
         {"factor", io::value_to_json(c.factor)},
         {"edge_factor", io::value_to_json(c.edge_factor)},
         {"family", c.family.to_string()},
         {"family_size", c.family_size},
         {"k_range", {c.k_min, c.k_max}},
         {"stabilized", c.stabilized},
         {"infinity_set", io::ids_to_json(space, c.infinity_set)},
         {"corrected_u", io::field_to_json(space, c.corrected_u)},
         {"corrected_g", io::field_to_json(space, c.corrected_g)},
         {"refined_g", io::field_to_json(space, c.refined_gradient)}};
  if (with_levels) {
    Json levels = Json::array();
    for (const LevelRecord& lv : c.levels) levels.push_back(level_json(space, lv));
    j["levels"] = std::move(levels);
  }
  return j;
}

ConversionOptions conversion_options(Request& req) {
  ConversionOptions opt;
  opt.tail = static_cast<int>(req.number("tail", 8.0));
  opt.family = req.policy("simple:6");
  opt.curve_cap = req.curve_cap();
  return opt;
}

Response cmd_check_hajlasz(Request& req) {
  const Field u = req.field({"u", "f"});
  const Field g = req.field({"g"});
  const ViolationReport r = check_hajlasz(req.space(), u, g);
  return {pair_report_json(req.space(), r, u, g), r.passed ? 0 : 1};
}

Response cmd_check_local(Request& req) {
  const Field u = req.field({"u", "f"});
  const Field g = req.field({"g"});
  const Cover cover = req.required_cover();
  const ViolationReport r = check_local_hajlasz(req.space(), u, g, cover);
  Json j = pair_report_json(req.space(), r, u, g);
  j["patches"] = cover.patches.size();
  return {j, r.passed ? 0 : 1};
}

Response cmd_check_upper(Request& req) {
  const Field u = req.field({"u", "f"});
  const Field g = req.field({"g"});
  const CurveFamily family = req.family("edges");
  std::optional<double> weak;
  if (req.has("weak_p")) weak = req.number("weak_p");
  const ViolationReport r = check_upper(req.space(), u, g, family, weak);
  Json j = curve_report_json(req.space(), r, u, g, family);
  j["family"] = family.policy.to_string();
  return {j, r.passed ? 0 : 1};
}

Response cmd_min_gradient(Request& req) {
  const Field u = req.field({"u", "f"});
  const FunctionNorm norm = FunctionNorm::parse(req.text("norm", "lp:2"));
  const std::string kind = req.text("kind", "hajlasz");
  solver::NormMinimization min;
  if (kind == "hajlasz") {
    min = min_hajlasz_gradient(req.space(), u, norm);
  } else if (kind == "local") {
    min = min_hajlasz_gradient(req.space(), u, norm, HajlaszMode::local(req.required_cover()));
  } else if (kind == "upper") {
    min = min_upper_gradient(req.space(), u, norm);
  } else {
    throw Error(ErrorCode::Parse, "kind must be hajlasz, local or upper");
  }
  Json j{{"kind", kind},
         {"norm", norm.to_string()},
         {"value", io::value_to_json(min.value)},
         {"gradient", io::field_to_json(req.space(), min.x)},
         {"solver", stats_json(min.stats)}};
  return {j, min.stats.converged ? 0 : 1};
}

Response cmd_mcshane(Request& req) {
  const MetricMeasureSpace& space = req.space();
  auto [anchors, values] = io::parse_partial_field(space, req.raw_field(req.has_field("f") ? "f" : "u"));
  const double L = req.number("lipschitz");
  const Field F = mcshane_extend(space, anchors, values, L);
  bool matches = true;
  for (std::size_t i = 0; i < anchors.size(); ++i) matches = matches && F[anchors[i]] == values[i];
  bool lipschitz = true;
  for (PointIndex x = 0; x < space.size(); ++x) {
    for (PointIndex y = x + 1; y < space.size(); ++y) {
      lipschitz = lipschitz && std::abs(F[x] - F[y]) <= L * space.distance(x, y);
    }
  }
  Json j{{"anchors", io::ids_to_json(space, anchors)},
         {"lipschitz", L},
         {"extension", io::field_to_json(space, F)},
         {"matches_on_anchors", matches},
         {"lipschitz_everywhere", lipschitz}};
  return {j, matches && lipschitz ? 0 : 1};
}

Response cmd_convert(Request& req) {
  const Field u = req.field({"u", "f"});
  const Field g = req.field({"g"});
  const ConversionCertificate c = hajlasz_to_upper(req.space(), u, g, conversion_options(req));
  return {certificate_json(req.space(), c, !req.flag("summary")), c.passed() ? 0 : 1};
}

Response cmd_glue(Request& req) {
  const MetricMeasureSpace& space = req.space();
  const Field u = req.field({"u", "f"});
  const Field g = req.field({"g"});
  const Cover cover = req.required_cover();
  const GlueCertificate c = glue_local(space, u, g, cover, conversion_options(req));
  Json patches = Json::array();
  for (std::size_t i = 0; i < c.patches.size(); ++i) {
    const ConversionCertificate& pc = c.patches[i];
    std::vector<PointIndex> inf;
    for (std::size_t k : pc.infinity_set) inf.push_back(cover.patches[i][k]);
    patches.push_back({{"points", io::ids_to_json(space, cover.patches[i])},
                       {"factor", io::value_to_json(pc.factor)},
                       {"levels_ok", pc.levels_ok()},
                       {"stabilized", pc.stabilized},
                       {"k_range", {pc.k_min, pc.k_max}},
                       {"infinity_set", io::ids_to_json(space, inf)}});
  }
  Json disagreements = Json::array();
  for (const Disagreement& d : c.disagreements) {
    disagreements.push_back({{"patches", {d.patch_a, d.patch_b}}, {"points", io::ids_to_json(space, d.points)}});
  }
  Json j{{"passed", c.passed()},
         {"factor", io::value_to_json(c.factor)},
         {"family", c.family.to_string()},
         {"family_size", c.family_size},
         {"glued_u", io::field_to_json(space, c.glued_u)},
         {"glued_g", io::field_to_json(space, c.glued_g)},
         {"zero_set", io::ids_to_json(space, c.zero_set)},
         {"disagreements", std::move(disagreements)},
         {"degenerate_patches", c.degenerate_patches},
         {"patches", std::move(patches)}};
  return {j, c.passed() ? 0 : 1};
}

Response cmd_modulus(Request& req) {
  const MetricMeasureSpace& space = req.space();
  const CurveFamily family = req.family("edges");
  const double p = req.number("p", 2.0);
  const ModulusResult m = modulus(space, family, p);
  Json j{{"p", p},
         {"family", family.policy.to_string()},
         {"family_size", family.curves.size()},
         {"value", m.value},
         {"rho", io::field_to_json(space, m.rho)},
         {"iterations", m.iterations},
         {"rounds", m.rounds},
         {"active_curves", m.active_curves},
         {"converged", m.converged},
         {"kkt_residual", m.kkt_residual},
         {"exceptional", m.value <= 1e-10}};
  return {j, m.converged ? 0 : 1};
}

Response cmd_maximal(Request& req) {
  const Field f = req.field({"f", "u", "rho"});
  const std::string kind = req.text("kind", "restricted");
  Json j{{"kind", kind}};
  if (kind == "restricted") {
    const double R = req.number("R");
    j["R"] = R;
    j["values"] = io::field_to_json(req.space(), maximal_restricted(req.space(), f, R))["values"];
  } else if (kind == "noncentered") {
    const double r = req.number("r", 1.0);
    j["r"] = r;
    j["values"] = io::field_to_json(req.space(), maximal_noncentered(req.space(), f, r))["values"];
  } else if (kind == "local-gradient" || kind == "global-gradient") {
    const Field u = req.field({"u"});
    const MaximalGradient mg = kind == "local-gradient"
                                   ? hajlasz_from_upper_local(req.space(), u, f, req.number("r"), req.number("q", 1.0))
                                   : hajlasz_from_upper_global(req.space(), u, f, req.number("r", 1.0));
    j["values"] = io::field_to_json(req.space(), mg.field)["values"];
    j["constant"] = io::value_to_json(mg.constant);
    if (mg.cover) j["patches"] = mg.cover->patches.size();
  } else {
    throw Error(ErrorCode::Parse, "kind must be restricted, noncentered, local-gradient or global-gradient");
  }
  return {j, 0};
}

Response cmd_norm(Request& req) {
  const Field u = req.field({"u", "f"});
  SobolevNormSpec spec;
  spec.gradient = SobolevNormSpec::parse_gradient(req.text("kind", "upper"));
  spec.lattice = FunctionNorm::parse(req.text("lattice", req.text("norm", "lp:2")));
  spec.homogeneous = req.flag("homogeneous");
  if (spec.gradient == SobolevNormSpec::Gradient::LocalHajlasz) spec.cover = req.required_cover();
  const SobolevNorm n = sobolev_norm(req.space(), u, spec);
  Json j{{"kind", SobolevNormSpec::gradient_name(spec.gradient)},
         {"lattice", spec.lattice.to_string()},
         {"homogeneous", spec.homogeneous},
         {"value", io::value_to_json(n.value)},
         {"function_norm", io::value_to_json(n.function_norm)},
         {"gradient_norm", io::value_to_json(n.gradient_norm)},
         {"gradient", io::field_to_json(req.space(), n.gradient)},
         {"solver", stats_json(n.stats)}};
  return {j, n.stats.converged ? 0 : 1};
}

Response cmd_poincare(Request& req) {
  const Field u = req.field({"u", "f"});
  const Field g = req.field({"g"});
  const double p = req.number("p", 1.0);
  const double lambda = req.number("lambda", 1.0);
  const double R0 = req.number("R0", kInf);
  Json sweep = Json::object();
  for (double l : {1.0, 2.0, 4.0}) {
    sweep[std::to_string(static_cast<int>(l))] = io::value_to_json(poincare_constant(req.space(), u, g, p, l, R0));
  }
  Json j{{"p", p},
         {"lambda", lambda},
         {"R0", io::value_to_json(R0)},
         {"constant", io::value_to_json(poincare_constant(req.space(), u, g, p, lambda, R0))},
         {"lambda_sweep", std::move(sweep)}};
  return {j, 0};
}

Response cmd_embed(Request& req) {
  const Field u = req.field({"u", "f"});
  const FunctionNorm lattice = FunctionNorm::parse(req.text("lattice", req.text("norm", "lp:2")));
  const EmbeddingReport r = embedding_report(req.space(), u, lattice, req.required_cover(), req.flag("homogeneous"));
  Json j{{"lattice", lattice.to_string()},
         {"m_norm", io::value_to_json(r.m_norm)},
         {"n_norm", io::value_to_json(r.n_norm)},
         {"m_local_norm", io::value_to_json(r.m_local_norm)},
         {"n_over_m", io::value_to_json(r.n_over_m)},
         {"n_over_m_local", io::value_to_json(r.n_over_m_local)},
         {"bound_ok", r.bound_ok},
         {"local_ok", r.local_ok}};
  return {j, r.bound_ok && r.local_ok ? 0 : 1};
}

Response cmd_doubling(Request& req) {
  const double c = doubling_constant(req.space(), req.number("R0", kInf));
  return {Json{{"constant", io::value_to_json(c)}}, 0};
}

Response cmd_generate(Request& req) {
  const double seed = req.number("seed", 0.0);
  if (!(seed >= 0.0) || seed != std::floor(seed)) throw Error(ErrorCode::ParameterRange, "seed must be a count");
  const auto s = static_cast<std::uint64_t>(seed);
  Instance inst = generate(req.text("generator"), s);
  for (const std::string& recipe : req.strings("recipes")) {
    if (recipe == "lipschitz") {
      inst.fields["u"] = lipschitz_field(inst.space, s);
    } else if (recipe == "random") {
      inst.fields["random"] = random_field(inst.space, s);
    } else {
      throw Error(ErrorCode::Parse, "field recipe must be lipschitz or random, got '" + recipe + "'");
    }
  }
  Json fields = Json::object();
  for (const auto& [name, f] : inst.fields) fields[name] = io::field_to_json(inst.space, f);
  Response resp{Json{{"space", io::space_to_json(inst.space)}, {"fields", std::move(fields)}}, 0};
  resp.digits = io::kRoundTripDigits;
  return resp;
}

using Handler = std::function<Response(Request&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"check-hajlasz", cmd_check_hajlasz}, {"check-local", cmd_check_local}, {"check-upper", cmd_check_upper},
      {"min-gradient", cmd_min_gradient},   {"mcshane", cmd_mcshane},         {"convert", cmd_convert},
      {"glue", cmd_glue},                   {"modulus", cmd_modulus},         {"maximal", cmd_maximal},
      {"norm", cmd_norm},                   {"poincare", cmd_poincare},       {"embed", cmd_embed},
      {"doubling", cmd_doubling},           {"generate", cmd_generate}};
  return table;
}

Response error_response(const std::string& code, const std::string& message) {
  return {Json{{"error", {{"code", code}, {"message", message}}}}, 2};
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, h] : handlers()) out.push_back(name);
    return out;
  }();
  return names;
}

Response run(const io::Json& request) {
  try {
    Request req(request);
    const std::string name = req.text("command");
    const auto it = handlers().find(name);
    if (it == handlers().end()) throw Error(ErrorCode::InvalidArgument, "unknown command '" + name + "'");
    Response resp = it->second(req);
    resp.body["command"] = name;
    return resp;
  } catch (const Error& e) {
    return error_response(error_code_name(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return error_response("Parse", e.what());
  } catch (const std::exception& e) {
    return error_response("InvalidArgument", e.what());
  }
}

Response run_text(const std::string& request) {
  try {
    return run(io::parse_text(request));
  } catch (const Error& e) {
    return error_response(error_code_name(e.code()), e.what());
  }
}

}  // namespace mmgrad
