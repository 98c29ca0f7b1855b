#include "linkobs/degree.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace linkobs {

std::string to_string(DegreeMethod m) {
  switch (m) {
    case DegreeMethod::GaussLinkingIntegral: return "gauss-linking-integral";
    case DegreeMethod::WindingAngleSum: return "winding-angle-sum";
    case DegreeMethod::SolidAngleSimplicial: return "solid-angle-simplicial";
  }
  return "gauss-linking-integral";
}

DegreeReport make_degree_report(double estimate, DegreeMethod method, std::size_t samples_used) {
  if (!std::isfinite(estimate)) throw NumericFailure("degree estimate is not finite");
  DegreeReport rep;
  rep.estimate = estimate;
  rep.rounded = static_cast<int>(std::lround(estimate));
  rep.residual = std::abs(estimate - rep.rounded);
  rep.method = method;
  rep.samples_used = samples_used;
  if (!(rep.residual < 0.5))
    throw NumericFailure("degree residual " + std::to_string(rep.residual) + " >= 0.5; refine sampling");
  return rep;
}

GaussMapProbe GaussMapProbe::make(const EmbeddedPair& pair, std::size_t count, unsigned seed) {
  GaussMapProbe probe;
  probe.pair = &pair;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = pair.ambient_dim();
  while (probe.direction_samples.size() < count) {
    Vec d(n);
    for (int i = 0; i < n; ++i) d(i) = normal(rng);
    const double nrm = d.norm();
    if (nrm < 1e-6) continue;
    probe.direction_samples.push_back(d / nrm);
  }
  return probe;
}

Vec gauss_map(const EmbeddedPair& pair, std::size_t i, std::size_t j) {
  require(i < pair.side_a.size() && j < pair.side_b.size(), "gauss_map index out of range");
  const Vec diff = pair.side_a.point(i) - pair.side_b.point(j);
  const double nrm = diff.norm();
  if (!(nrm > 0.0)) throw InvalidArgument("gauss_map: coincident points violate disjointness");
  return diff / nrm;
}

double segment_pair_linking(const Eigen::Vector3d& p1, const Eigen::Vector3d& p2, const Eigen::Vector3d& p3,
                            const Eigen::Vector3d& p4) {
  const Eigen::Vector3d r13 = p3 - p1, r14 = p4 - p1, r23 = p3 - p2, r24 = p4 - p2;
  Eigen::Vector3d n[4] = {r13.cross(r14), r14.cross(r24), r24.cross(r23), r23.cross(r13)};
  for (auto& v : n) {
    const double len = v.norm();
    if (!(len > 1e-300)) return 0.0;  // coplanar segments contribute nothing
    v /= len;
  }
  double omega = 0.0;
  for (int k = 0; k < 4; ++k) omega += std::asin(std::clamp(n[k].dot(n[(k + 1) % 4]), -1.0, 1.0));
  const double s = (p4 - p3).cross(p2 - p1).dot(r13);
  if (s == 0.0) return 0.0;
  return (s > 0.0 ? omega : -omega) / (4.0 * std::numbers::pi);
}

DegreeReport linking_number(const EmbeddedPair& pair) {
  require(pair.ambient_dim() == 3, "linking number needs ambient dimension 3");
  const auto& a = pair.side_a;
  const auto& b = pair.side_b;
  require(a.kind() == ShapeKind::Curve && b.kind() == ShapeKind::Curve, "linking number needs two closed curves");
  require(a.size() >= 8 && b.size() >= 8, "linking number needs at least 8 samples per curve");
  require(pair.min_gap > 0.0, "curves intersect");

  const Eigen::Index na = a.points.cols(), nb = b.points.cols();
  double total = 0.0;
  for (Eigen::Index i = 0; i < na; ++i) {
    const Eigen::Vector3d p1 = a.points.col(i), p2 = a.points.col((i + 1) % na);
    double row = 0.0;
    for (Eigen::Index j = 0; j < nb; ++j)
      row += segment_pair_linking(p1, p2, b.points.col(j), b.points.col((j + 1) % nb));
    total += row;
  }
  return make_degree_report(total, DegreeMethod::GaussLinkingIntegral, a.size() + b.size());
}

namespace {

double winding_sum(const PointCloud& sphere, const Vec& p) {
  const auto& simp = sphere.parametrization->simplices;
  double total = 0.0;
  for (const auto& e : simp) {
    const Vec u = sphere.point(e[0]) - p;
    const Vec v = sphere.point(e[1]) - p;
    total += std::atan2(u(0) * v(1) - u(1) * v(0), u.dot(v));
  }
  return total / (2.0 * std::numbers::pi);
}

// Van Oosterom-Strackee signed solid angle of each triangle seen from p.
double solid_angle_sum_3d(const PointCloud& sphere, const Vec& p) {
  const Eigen::Vector3d o = p;
  double total = 0.0;
  for (const auto& t : sphere.parametrization->simplices) {
    const Eigen::Vector3d a = Eigen::Vector3d(sphere.point(t[0])) - o;
    const Eigen::Vector3d b = Eigen::Vector3d(sphere.point(t[1])) - o;
    const Eigen::Vector3d c = Eigen::Vector3d(sphere.point(t[2])) - o;
    const double la = a.norm(), lb = b.norm(), lc = c.norm();
    const double num = a.dot(b.cross(c));
    const double den = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
    total += 2.0 * std::atan2(num, den);
  }
  return total / (4.0 * std::numbers::pi);
}

// Solid angles of the simplices on S^3 measured by direction probes: the
// signed number of simplex cones containing a probe is the degree for
// every regular probe, and averaging over probes estimates the normalised
// solid-angle sum.
double solid_angle_probe_4d(const PointCloud& sphere, const Vec& p, const GaussMapProbe& probe) {
  const auto& simp = sphere.parametrization->simplices;
  std::vector<Eigen::PartialPivLU<Eigen::Matrix4d>> lus;
  std::vector<int> signs;
  for (const auto& s : simp) {
    Eigen::Matrix4d U;
    for (int k = 0; k < 4; ++k) {
      const Eigen::Vector4d d = Eigen::Vector4d(sphere.point(s[static_cast<std::size_t>(k)])) - Eigen::Vector4d(p);
      U.col(k) = d / d.norm();
    }
    const double det = U.determinant();
    if (std::abs(det) < 1e-300) continue;
    lus.emplace_back(U);
    signs.push_back(det > 0.0 ? 1 : -1);
  }
  double total = 0.0;
  for (const auto& dir : probe.direction_samples) {
    const Eigen::Vector4d d = dir;
    int count = 0;
    for (std::size_t k = 0; k < lus.size(); ++k) {
      const Eigen::Vector4d lambda = lus[k].solve(d);
      if ((lambda.array() >= 0.0).all()) count += signs[k];
    }
    total += count;
  }
  return total / static_cast<double>(probe.direction_samples.size());
}

}  // namespace

DegreeReport sphere_point_degree(const EmbeddedPair& pair) {
  const int n = pair.ambient_dim();
  require(n >= 2 && n <= 4, "sphere-point degree supports dimensions 2 to 4");
  require(pair.side_b.size() == 1, "sphere-point degree needs a single point on side B");
  const auto& sphere = pair.side_a;
  require(sphere.kind() == ShapeKind::Sphere && !sphere.parametrization->simplices.empty(),
          "side A is not a triangulated sphere");
  const Vec p = pair.side_b.point(0);
  const auto& desc = sphere.parametrization->descriptor;
  if (desc.value("shape", "") == "unit-sphere" && !desc.contains("mapped_by"))
    require(std::abs(p.norm() - 1.0) > 1e-9, "point lies on the sphere");
  require(pair.min_gap > 1e-9, "point lies on the sampled sphere");

  if (n == 2) return make_degree_report(winding_sum(sphere, p), DegreeMethod::WindingAngleSum, sphere.size());
  if (n == 3)
    return make_degree_report(solid_angle_sum_3d(sphere, p), DegreeMethod::SolidAngleSimplicial, sphere.size());
  const GaussMapProbe probe = GaussMapProbe::make(pair, 16);
  return make_degree_report(solid_angle_probe_4d(sphere, p, probe), DegreeMethod::SolidAngleSimplicial,
                            sphere.size());
}

bool has_defined_degree(const EmbeddedPair& pair) {
  const auto& a = pair.side_a;
  const auto& b = pair.side_b;
  if (pair.ambient_dim() == 3 && a.kind() == ShapeKind::Curve && b.kind() == ShapeKind::Curve) return true;
  return pair.ambient_dim() >= 2 && pair.ambient_dim() <= 4 && b.size() == 1 && a.kind() == ShapeKind::Sphere &&
         a.parametrization && !a.parametrization->simplices.empty();
}

DegreeReport pair_degree(const EmbeddedPair& pair) {
  if (pair.ambient_dim() == 3 && pair.side_a.kind() == ShapeKind::Curve && pair.side_b.kind() == ShapeKind::Curve)
    return linking_number(pair);
  if (pair.side_b.size() == 1) return sphere_point_degree(pair);
  throw InvalidArgument("degree is defined only for curve-curve pairs in R^3 and sphere-point pairs");
}

ProjectionProbeResult projection_probe(const EmbeddedPair& pair, int target_dim, int t_steps, double threshold) {
  const int n = pair.ambient_dim();
  require(target_dim >= 1 && target_dim < n, "projection target dimension must be in [1, n)");
  require(t_steps >= 2, "homotopy trace needs at least 2 steps");
  auto project = [&](const PointCloud& c) {
    PointCloud out = c;
    out.points = c.points.topRows(target_dim);
    if (out.parametrization) {
      out.parametrization->descriptor["projected_to"] = target_dim;
      out.parametrization->simplices.clear();
    }
    return out;
  };
  ProjectionProbeResult res;
  res.report = check_separation(project(pair.side_a), project(pair.side_b), threshold);
  for (int k = 0; k < t_steps; ++k) {
    const double t = static_cast<double>(k) / (t_steps - 1);
    Mat fa = pair.side_a.points, gb = pair.side_b.points;
    fa.bottomRows(n - target_dim) *= (1.0 - t);
    gb.bottomRows(n - target_dim) *= (1.0 - t);
    res.homotopy_trace.emplace_back(t, min_pairwise_gap(fa, gb));
  }
  return res;
}

}  // namespace linkobs
