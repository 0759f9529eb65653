// Command-line front door. Builds a JSON request from flags and files and
// hands it to the shared library; exit codes come from the library.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmgrad/mmgrad.h"

namespace {

using Json = nlohmann::json;

constexpr int kInputError = 2;

struct Options {
  std::string space;
  std::vector<std::string> fields;
  std::string curves;
  std::string norm;
  std::string cover;
  std::optional<double> cover_radius;
  std::optional<unsigned long long> seed;
  std::string out;
  std::optional<double> p, lambda, R0, R, r, q, lipschitz, weak_p, tail, curve_cap;
  std::string kind;
  std::string generator;
  std::vector<std::string> recipes;
  bool homogeneous = false;
  bool summary = false;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

/// NAME=FILE or NAME=FILE#SOURCE; a bundle file ({"fields": ...}) yields the
/// field called SOURCE (default NAME), and a report yields its SOURCE member
/// (e.g. the "gradient" of min-gradient).
std::pair<std::string, Json> load_field(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw InputError("--field expects NAME=FILE, got '" + spec + "'");
  const std::string name = spec.substr(0, eq);
  std::string path = spec.substr(eq + 1);
  std::string source = name;
  bool explicit_source = false;
  if (const auto hash = path.find('#'); hash != std::string::npos) {
    source = path.substr(hash + 1);
    path = path.substr(0, hash);
    explicit_source = true;
  }
  Json j = load_json(path);
  if (j.contains("fields")) {
    if (!j["fields"].contains(source)) throw InputError("'" + path + "' has no field '" + source + "'");
    j = j["fields"][source];
  } else if (explicit_source) {
    if (!j.is_object() || !j.contains(source) || !j[source].is_object()) {
      throw InputError("'" + path + "' has no field '" + source + "'");
    }
    j = j[source];
  }
  return {name, j};
}

bool is_policy(const std::string& s) { return s == "edges" || s == "shortest" || s.rfind("simple:", 0) == 0; }

Json build_request(const std::string& command, const Options& o) {
  Json req{{"command", command}};
  if (!o.space.empty()) {
    Json s = load_json(o.space);
    req["space"] = s.contains("space") ? s["space"] : s;
  }
  Json fields = Json::object();
  for (const std::string& spec : o.fields) {
    auto [name, j] = load_field(spec);
    fields[name] = std::move(j);
  }
  if (!fields.empty()) req["fields"] = std::move(fields);
  if (!o.curves.empty()) req["curves"] = is_policy(o.curves) ? Json(o.curves) : load_json(o.curves);
  if (!o.cover.empty()) req["cover"] = load_json(o.cover);
  if (!o.norm.empty()) {
    req["norm"] = o.norm;
    req["lattice"] = o.norm;
  }
  if (!o.kind.empty()) req["kind"] = o.kind;
  if (!o.generator.empty()) req["generator"] = o.generator;
  if (!o.recipes.empty()) req["recipes"] = o.recipes;
  if (o.homogeneous) req["homogeneous"] = true;
  if (o.summary) req["summary"] = true;
  if (o.seed) req["seed"] = *o.seed;
  const std::map<const char*, const std::optional<double>*> numbers{
      {"cover_radius", &o.cover_radius}, {"p", &o.p},       {"lambda", &o.lambda},
      {"R0", &o.R0},                     {"R", &o.R},       {"r", &o.r},
      {"q", &o.q},                       {"lipschitz", &o.lipschitz}, {"weak_p", &o.weak_p},
      {"tail", &o.tail},                 {"curve_cap", &o.curve_cap}};
  for (const auto& [key, value] : numbers) {
    if (*value) req[key] = **value;
  }
  return req;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--space", o.space, "Space JSON file (or a generate bundle)");
  sub->add_option("--field", o.fields, "NAME=FILE[#SOURCE], repeatable");
  sub->add_option("--curves", o.curves, "edges | shortest | simple:H | curve family file");
  sub->add_option("--norm,--lattice", o.norm, "lp:P | lp:inf | morrey:P:Q");
  sub->add_option("--cover", o.cover, "Cover JSON file");
  sub->add_option("--cover-radius", o.cover_radius, "Cover by open balls of this radius");
  sub->add_option("--seed", o.seed, "Seed for random generators");
  sub->add_option("--out", o.out, "Write the report here instead of stdout");
  sub->add_option("--p", o.p, "Exponent p");
  sub->add_option("--lambda", o.lambda, "Ball dilation for poincare");
  sub->add_option("--R0", o.R0, "Radius bound for poincare and doubling");
  sub->add_option("--R", o.R, "Radius bound for the restricted maximal function");
  sub->add_option("--r", o.r, "Maximal exponent or radius");
  sub->add_option("--q", o.q, "Exponent q for the local maximal gradient");
  sub->add_option("--lipschitz,-L", o.lipschitz, "Lipschitz constant for mcshane");
  sub->add_option("--weak-p", o.weak_p, "Skip curves of p-modulus zero in check-upper");
  sub->add_option("--tail", o.tail, "Extra levels past the top level in convert and glue");
  sub->add_option("--curve-cap", o.curve_cap, "Largest curve family to enumerate");
  sub->add_option("--kind", o.kind, "Gradient kind or maximal operator kind");
  sub->add_option("--generator", o.generator, "grid:NX:NY[:S] | random:N:R | annulus:H");
  sub->add_option("--recipe", o.recipes, "Extra generated fields: lipschitz, random");
  sub->add_flag("--homogeneous", o.homogeneous, "Drop the function-norm term");
  sub->add_flag("--summary", o.summary, "Omit per-level records from convert");
}

int emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream file(out);
  if (!file) {
    std::cerr << "cannot write '" << out << "'\n";
    return kInputError;
  }
  file << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hajlasz and upper gradients on finite metric measure spaces"};
  app.require_subcommand(1);
  Options opts;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"check-hajlasz", "Check a Hajlasz gradient on every pair of points"},
      {"check-local", "Check a Hajlasz gradient inside each patch of a cover"},
      {"check-upper", "Check an upper gradient along a curve family"},
      {"min-gradient", "Smallest Hajlasz or upper gradient in a lattice norm"},
      {"mcshane", "Lipschitz extension of a field restricted to a set"},
      {"convert", "Turn a Hajlasz gradient into an upper gradient"},
      {"glue", "Convert patchwise over a cover and glue the results"},
      {"modulus", "p-modulus of a curve family"},
      {"maximal", "Maximal functions and maximal gradients"},
      {"norm", "Sobolev-type norm of a field"},
      {"poincare", "Best Poincare constant over balls"},
      {"embed", "Compare the Hajlasz and upper norms of a field"},
      {"doubling", "Doubling constant of the measure"},
      {"generate", "Build a sample space with fields"}};
  for (const auto& [name, about] : commands) add_common(app.add_subcommand(name, about), opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  Json request;
  try {
    request = build_request(command, opts);
  } catch (const std::exception& e) {
    std::cerr << "mmgrad: " << e.what() << "\n";
    return kInputError;
  }

  char* response = nullptr;
  int exit_code = kInputError;
  const std::string text = request.dump();
  if (mmgrad_run(text.c_str(), &response, &exit_code) != MMGRAD_OK) {
    std::cerr << "mmgrad: " << mmgrad_last_error() << "\n";
    return kInputError;
  }
  const std::string report = response;
  mmgrad_string_free(response);
  if (exit_code == kInputError) {
    try {
      const Json err = Json::parse(report);
      if (err.contains("error")) std::cerr << "mmgrad: " << err["error"]["message"].get<std::string>() << "\n";
    } catch (const std::exception&) {
    }
  }
  if (const int rc = emit(report, opts.out); rc != 0) return rc;
  return exit_code;
}
