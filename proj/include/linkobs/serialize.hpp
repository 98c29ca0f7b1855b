#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "linkobs/analysis.hpp"
#include "linkobs/degree.hpp"
#include "linkobs/flow.hpp"
#include "linkobs/geometry.hpp"
#include "linkobs/net.hpp"

namespace linkobs {

using json = nlohmann::json;

void to_json(json& j, const Parametrization& p);
void from_json(const json& j, Parametrization& p);
void to_json(json& j, const PointCloud& c);
void from_json(const json& j, PointCloud& c);
void to_json(json& j, const EmbeddedPair& p);
void from_json(const json& j, EmbeddedPair& p);
void to_json(json& j, const DegreeReport& r);
void to_json(json& j, const Ball& b);
void to_json(json& j, const SeparationReport& r);
void to_json(json& j, const ApproxGapReport& r);
void to_json(json& j, const MLPSpec& s);
void from_json(const json& j, MLPSpec& s);
void to_json(json& j, const MLP& m);
void from_json(const json& j, MLP& m);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// One point per row under the header x1,...,xn.
std::string cloud_to_csv(const PointCloud& c);
PointCloud cloud_from_csv(const std::string& text);

std::string loss_trace_to_csv(const std::vector<double>& trace);
std::string homotopy_trace_to_csv(const std::vector<HomotopyTracePoint>& trace);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// FNV-1a 64-bit hash as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace linkobs
