#include "linkobs/serialize.hpp"

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace linkobs {

namespace {

std::vector<double> to_vector(const Vec& v) { return {v.data(), v.data() + v.size()}; }

Vec to_vec(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json rows_of(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat from_rows(const json& rows, Eigen::Index expect_cols) {
  Mat m(static_cast<Eigen::Index>(rows.size()), expect_cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require(rows[r].size() == static_cast<std::size_t>(expect_cols), "ragged matrix rows");
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c].get<double>();
  }
  return m;
}

}  // namespace

void to_json(json& j, const Parametrization& p) {
  j = json{{"kind", to_string(p.kind)}, {"descriptor", p.descriptor}};
  if (!p.parameters.empty()) j["parameters"] = p.parameters;
  if (!p.simplices.empty()) j["simplices"] = p.simplices;
}

void from_json(const json& j, Parametrization& p) {
  p.kind = shape_kind_from_string(j.at("kind").get<std::string>());
  p.descriptor = j.value("descriptor", json::object());
  p.parameters = j.value("parameters", std::vector<double>{});
  p.simplices = j.value("simplices", std::vector<std::vector<std::size_t>>{});
}

void to_json(json& j, const PointCloud& c) {
  json pts = json::array();
  for (Eigen::Index i = 0; i < c.points.cols(); ++i) pts.push_back(to_vector(c.points.col(i)));
  j = json{{"ambient_dim", c.ambient_dim()}, {"orientation", c.orientation}, {"points", std::move(pts)}};
  j["parametrization"] = c.parametrization ? json(*c.parametrization) : json(nullptr);
}

void from_json(const json& j, PointCloud& c) {
  const int dim = j.at("ambient_dim").get<int>();
  require(dim > 0, "ambient_dim must be positive");
  const auto& pts = j.at("points");
  c.points.resize(dim, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    require(pts[i].size() == static_cast<std::size_t>(dim), "point has wrong dimension");
    c.points.col(static_cast<Eigen::Index>(i)) = to_vec(pts[i]);
  }
  c.orientation = j.value("orientation", 1);
  if (j.contains("parametrization") && !j["parametrization"].is_null())
    c.parametrization = j["parametrization"].get<Parametrization>();
  else
    c.parametrization.reset();
  c.validate();
}

void to_json(json& j, const EmbeddedPair& p) {
  j = json{{"side_a", p.side_a}, {"side_b", p.side_b}, {"min_gap", p.min_gap}};
  j["expected_degree"] = p.expected_degree ? json(*p.expected_degree) : json(nullptr);
}

void from_json(const json& j, EmbeddedPair& p) {
  std::optional<int> deg;
  if (j.contains("expected_degree") && !j["expected_degree"].is_null()) deg = j["expected_degree"].get<int>();
  p = make_pair(j.at("side_a").get<PointCloud>(), j.at("side_b").get<PointCloud>(), deg);
}

void to_json(json& j, const DegreeReport& r) {
  j = json{{"estimate", r.estimate},
           {"rounded", r.rounded},
           {"residual", r.residual},
           {"method", to_string(r.method)},
           {"samples_used", r.samples_used}};
}

void to_json(json& j, const Ball& b) { j = json{{"center", to_vector(b.center)}, {"radius", b.radius}}; }

void to_json(json& j, const SeparationReport& r) {
  j = json{{"separated", r.separated},
           {"indeterminate", r.indeterminate},
           {"min_inter_gap", r.min_inter_gap},
           {"threshold", r.threshold},
           {"method", to_string(r.method)}};
  j["witness"] = r.witness ? json::array({to_vector(r.witness->first), to_vector(r.witness->second)}) : json(nullptr);
  j["ball_certificate"] =
      r.ball_certificate ? json::array({json(r.ball_certificate->first), json(r.ball_certificate->second)})
                         : json(nullptr);
}

void to_json(json& j, const ApproxGapReport& r) {
  j = json{{"delta", r.delta},
           {"sup_error_lower_bound", r.sup_error_lower_bound},
           {"argmax_point", to_vector(r.argmax_point)},
           {"net_at_origin", r.net_at_origin},
           {"net_range_on_sphere", {r.net_range_on_sphere.first, r.net_range_on_sphere.second}}};
}

void to_json(json& j, const MLPSpec& s) {
  j = json{{"layer_dims", s.layer_dims},
           {"activation", s.activation.name()},
           {"final_activation", s.final_activation == FinalActivation::None ? "none" : "same-as-hidden"},
           {"seed", s.seed}};
}

void from_json(const json& j, MLPSpec& s) {
  s.layer_dims = j.at("layer_dims").get<std::vector<int>>();
  s.activation = ActivationKind::parse(j.at("activation").get<std::string>());
  const auto fin = j.value("final_activation", std::string("same-as-hidden"));
  require(fin == "none" || fin == "same-as-hidden", "unknown final_activation: " + fin);
  s.final_activation = fin == "none" ? FinalActivation::None : FinalActivation::SameAsHidden;
  s.seed = j.value("seed", std::uint64_t{0});
  s.validate();
}

void to_json(json& j, const MLP& m) {
  json ws = json::array(), bs = json::array();
  for (const auto& w : m.weights) ws.push_back(rows_of(w));
  for (const auto& b : m.biases) bs.push_back(to_vector(b));
  j = json{{"spec", m.spec}, {"weights", std::move(ws)}, {"biases", std::move(bs)}};
}

void from_json(const json& j, MLP& m) {
  m.spec = j.at("spec").get<MLPSpec>();
  m.weights.clear();
  m.biases.clear();
  const auto& ws = j.at("weights");
  const auto& bs = j.at("biases");
  require(ws.size() == static_cast<std::size_t>(m.spec.depth()) && bs.size() == ws.size(),
          "layer count does not match spec");
  for (std::size_t i = 0; i < ws.size(); ++i) {
    m.weights.push_back(from_rows(ws[i], m.spec.layer_dims[i]));
    m.biases.push_back(to_vec(bs[i]));
  }
  m.validate();
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string cloud_to_csv(const PointCloud& c) {
  std::string out;
  for (int d = 0; d < c.ambient_dim(); ++d) out += (d ? ",x" : "x") + std::to_string(d + 1);
  out += '\n';
  for (Eigen::Index i = 0; i < c.points.cols(); ++i) {
    for (Eigen::Index d = 0; d < c.points.rows(); ++d) {
      if (d) out += ',';
      out += format_double(c.points(d, i));
    }
    out += '\n';
  }
  return out;
}

PointCloud cloud_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "empty CSV");
  const auto dim = static_cast<Eigen::Index>(std::count(line.begin(), line.end(), ',') + 1);
  std::vector<double> vals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    Eigen::Index count = 0;
    while (std::getline(row, cell, ',')) {
      double v = 0.0;
      auto r = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      require(r.ec == std::errc(), "malformed CSV value: " + cell);
      vals.push_back(v);
      ++count;
    }
    require(count == dim, "CSV row has wrong number of columns");
  }
  PointCloud c;
  c.points = Eigen::Map<const Mat>(vals.data(), dim, static_cast<Eigen::Index>(vals.size()) / dim);
  c.validate();
  return c;
}

std::string loss_trace_to_csv(const std::vector<double>& trace) {
  std::string out = "epoch,loss\n";
  for (std::size_t i = 0; i < trace.size(); ++i) out += std::to_string(i) + "," + format_double(trace[i]) + "\n";
  return out;
}

std::string homotopy_trace_to_csv(const std::vector<HomotopyTracePoint>& trace) {
  std::string out = "s,min_gap,degree_estimate\n";
  for (const auto& p : trace)
    out += format_double(p.s) + "," + format_double(p.min_gap) + "," +
           (p.degree_estimate ? format_double(*p.degree_estimate) : std::string()) + "\n";
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write file: " + path);
  out << text;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace linkobs
