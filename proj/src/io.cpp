#include "io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "error.hpp"
#include "extended.hpp"

namespace mmgrad::io {

namespace {

double as_number(const Json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "Infinity") return kInf;
  }
  throw Error(ErrorCode::Parse, what + " must be a number or \"inf\"");
}

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::Parse, where + " needs \"" + key + "\"");
  return j.at(key);
}

std::vector<PointIndex> parse_id_list(const MetricMeasureSpace& space, const Json& list, const std::string& where) {
  if (!list.is_array()) throw Error(ErrorCode::Parse, where + " must be an array of point ids");
  std::vector<PointIndex> out;
  for (const Json& id : list) {
    if (!id.is_string()) throw Error(ErrorCode::Parse, where + " must contain point id strings");
    out.push_back(space.index_of(id.get<std::string>()));
  }
  return out;
}

std::string format_double(double v, int digits) {
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void write_value(const Json& j, int digits, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
  const std::string close_pad(static_cast<std::size_t>(depth) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        write_value(it.value(), digits, depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool scalars = true;
      for (const Json& e : j) scalars = scalars && !e.is_structured();
      if (scalars) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write_value(j[i], digits, depth + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write_value(j[i], digits, depth + 1, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v, digits) : (v > 0 ? "\"inf\"" : "\"-inf\"");
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

MetricMeasureSpace parse_space(const Json& j) {
  const Json& points = member(j, "points", "space");
  if (!points.is_array() || points.empty()) throw Error(ErrorCode::Parse, "space needs a nonempty points array");
  std::vector<std::string> ids;
  std::vector<double> measure;
  for (const Json& p : points) {
    const Json& id = member(p, "id", "point");
    if (!id.is_string()) throw Error(ErrorCode::Parse, "point id must be a string");
    ids.push_back(id.get<std::string>());
    const double m = as_number(member(p, "measure", "point"), "measure");
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw Error(ErrorCode::InvalidArgument, "measure of '" + ids.back() + "' must be finite and >= 0");
    }
    measure.push_back(m);
  }
  const bool has_edges = j.contains("edges");
  const bool has_dist = j.contains("distances");
  if (has_edges == has_dist) throw Error(ErrorCode::Parse, "space needs exactly one of \"edges\" and \"distances\"");

  if (has_edges) {
    const Json& list = j.at("edges");
    if (!list.is_array()) throw Error(ErrorCode::Parse, "edges must be an array");
    std::vector<EdgeSpec> edges;
    for (const Json& e : list) {
      const Json& a = member(e, "a", "edge");
      const Json& b = member(e, "b", "edge");
      if (!a.is_string() || !b.is_string()) throw Error(ErrorCode::Parse, "edge endpoints must be point ids");
      edges.push_back({a.get<std::string>(), b.get<std::string>(), as_number(member(e, "length", "edge"), "length")});
    }
    return MetricMeasureSpace::build_from_edges(std::move(ids), edges, std::move(measure));
  }
  const Json& rows = j.at("distances");
  if (!rows.is_array()) throw Error(ErrorCode::Parse, "distances must be an array of rows");
  std::vector<std::vector<double>> dist;
  for (const Json& row : rows) {
    if (!row.is_array()) throw Error(ErrorCode::Parse, "distances must be an array of rows");
    std::vector<double> r;
    for (const Json& v : row) r.push_back(as_number(v, "distance"));
    dist.push_back(std::move(r));
  }
  return MetricMeasureSpace::build_explicit(std::move(ids), dist, std::move(measure));
}

Json space_to_json(const MetricMeasureSpace& space) {
  Json j;
  Json points = Json::array();
  for (PointIndex i = 0; i < space.size(); ++i) points.push_back({{"id", space.id(i)}, {"measure", space.measure(i)}});
  j["points"] = std::move(points);
  if (space.built_from_edges()) {
    Json edges = Json::array();
    for (const Edge& e : space.edges()) {
      edges.push_back({{"a", space.id(e.a)}, {"b", space.id(e.b)}, {"length", e.length}});
    }
    j["edges"] = std::move(edges);
  } else {
    Json rows = Json::array();
    for (PointIndex i = 0; i < space.size(); ++i) {
      Json row = Json::array();
      for (PointIndex k = 0; k < space.size(); ++k) row.push_back(space.distance(i, k));
      rows.push_back(std::move(row));
    }
    j["distances"] = std::move(rows);
  }
  return j;
}

std::pair<std::vector<PointIndex>, std::vector<double>> parse_partial_field(const MetricMeasureSpace& space,
                                                                           const Json& j) {
  const Json& values = member(j, "values", "field");
  if (!values.is_object()) throw Error(ErrorCode::Parse, "field values must be an object keyed by point id");
  std::vector<std::pair<PointIndex, double>> entries;
  for (auto it = values.begin(); it != values.end(); ++it) {
    entries.push_back({space.index_of(it.key()), as_number(it.value(), "value of '" + it.key() + "'")});
  }
  std::sort(entries.begin(), entries.end());
  std::pair<std::vector<PointIndex>, std::vector<double>> out;
  for (const auto& [i, v] : entries) {
    out.first.push_back(i);
    out.second.push_back(v);
  }
  return out;
}

Field parse_field(const MetricMeasureSpace& space, const Json& j) {
  auto [points, values] = parse_partial_field(space, j);
  if (points.size() != space.size()) {
    std::vector<bool> seen(space.size(), false);
    for (PointIndex p : points) seen[p] = true;
    for (PointIndex i = 0; i < space.size(); ++i) {
      if (!seen[i]) throw Error(ErrorCode::InvalidArgument, "field has no value at '" + space.id(i) + "'");
    }
  }
  return values;
}

Json value_to_json(double v) {
  if (is_inf(v)) return v > 0 ? Json("inf") : Json("-inf");
  return Json(v);
}

Json field_to_json(const MetricMeasureSpace& space, const Field& f) {
  Json values = Json::object();
  for (PointIndex i = 0; i < space.size(); ++i) values[space.id(i)] = value_to_json(f[i]);
  return Json{{"values", std::move(values)}};
}

CurveFamily parse_family(const MetricMeasureSpace& space, const Json& j) {
  const Json& curves = member(j, "curves", "curve family");
  if (!curves.is_array()) throw Error(ErrorCode::Parse, "curves must be an array of id lists");
  std::vector<std::vector<PointIndex>> walks;
  for (const Json& c : curves) walks.push_back(parse_id_list(space, c, "curve"));
  return family_from_walks(space, walks);
}

Json family_to_json(const MetricMeasureSpace& space, const CurveFamily& family) {
  Json curves = Json::array();
  for (const Curve& c : family.curves) curves.push_back(ids_to_json(space, c.vertices));
  return Json{{"curves", std::move(curves)}};
}

Cover parse_cover(const MetricMeasureSpace& space, const Json& j) {
  const Json& patches = member(j, "patches", "cover");
  if (!patches.is_array()) throw Error(ErrorCode::Parse, "patches must be an array of id lists");
  std::vector<std::vector<PointIndex>> out;
  for (const Json& p : patches) out.push_back(parse_id_list(space, p, "patch"));
  return make_cover(space, std::move(out));
}

Json cover_to_json(const MetricMeasureSpace& space, const Cover& cover) {
  Json patches = Json::array();
  for (const auto& p : cover.patches) patches.push_back(ids_to_json(space, p));
  return Json{{"patches", std::move(patches)}};
}

Json ids_to_json(const MetricMeasureSpace& space, const std::vector<PointIndex>& points) {
  Json ids = Json::array();
  for (PointIndex p : points) ids.push_back(space.id(p));
  return ids;
}

std::string write(const Json& j, int digits) {
  std::string out;
  write_value(j, digits, 0, out);
  out += "\n";
  return out;
}

}  // namespace mmgrad::io
