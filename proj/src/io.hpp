#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "curves.hpp"
#include "norms.hpp"
#include "space.hpp"

namespace mmgrad::io {

using Json = nlohmann::json;

/// Significant digits in reports; data files use round-trip precision.
inline constexpr int kReportDigits = 12;
inline constexpr int kRoundTripDigits = 17;

Json parse_text(const std::string& text);

/// {"points":[{"id","measure"}], "edges":[{"a","b","length"}]} or
/// {"points":..., "distances":[[...]]}; exactly one of edges/distances.
MetricMeasureSpace parse_space(const Json& j);
Json space_to_json(const MetricMeasureSpace& space);

/// {"values": {id: number | "inf"}} covering every point.
Field parse_field(const MetricMeasureSpace& space, const Json& j);
/// Same format restricted to the listed points (ascending index order).
std::pair<std::vector<PointIndex>, std::vector<double>> parse_partial_field(const MetricMeasureSpace& space,
                                                                           const Json& j);
Json field_to_json(const MetricMeasureSpace& space, const Field& f);
/// A number, or "inf" for +infinity.
Json value_to_json(double v);

/// {"curves": [[id, ...], ...]}.
CurveFamily parse_family(const MetricMeasureSpace& space, const Json& j);
Json family_to_json(const MetricMeasureSpace& space, const CurveFamily& family);

/// {"patches": [[id, ...], ...]}.
Cover parse_cover(const MetricMeasureSpace& space, const Json& j);
Json cover_to_json(const MetricMeasureSpace& space, const Cover& cover);

Json ids_to_json(const MetricMeasureSpace& space, const std::vector<PointIndex>& points);

/// Sorted keys, two-space indent, floats printed with the given number of
/// significant digits and -0 as 0. Identical input gives identical bytes.
std::string write(const Json& j, int digits = kReportDigits);

}  // namespace mmgrad::io
