#include "linkobs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sphere_mesh.hpp"

namespace linkobs {

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Curve: return "curve";
    case ShapeKind::Sphere: return "sphere";
    case ShapeKind::Point: return "point";
    case ShapeKind::Generic: return "generic";
  }
  return "generic";
}

ShapeKind shape_kind_from_string(const std::string& s) {
  if (s == "curve") return ShapeKind::Curve;
  if (s == "sphere") return ShapeKind::Sphere;
  if (s == "point") return ShapeKind::Point;
  if (s == "generic") return ShapeKind::Generic;
  throw InvalidArgument("unknown shape kind: " + s);
}

void PointCloud::validate() const {
  require(points.rows() > 0, "point cloud has zero ambient dimension");
  require(points.cols() > 0, "point cloud is empty");
  require(points.allFinite(), "point cloud has non-finite coordinates");
  require(orientation == 1 || orientation == -1, "orientation must be +1 or -1");
  if (!parametrization) return;
  const auto& par = *parametrization;
  if (par.kind == ShapeKind::Curve) {
    require(size() >= 3, "curve needs at least 3 samples");
    require(par.parameters.size() == size(), "curve parameter count mismatch");
    for (std::size_t i = 0; i < par.parameters.size(); ++i) {
      require(par.parameters[i] >= 0.0 && par.parameters[i] < 1.0, "curve parameter outside [0,1)");
      if (i > 0) require(par.parameters[i] > par.parameters[i - 1], "curve parameters must increase");
    }
  }
  if (par.kind == ShapeKind::Sphere && ambient_dim() == 3) require(size() >= 4, "2-sphere needs at least 4 samples");
  for (const auto& s : par.simplices)
    for (auto idx : s) require(idx < size(), "simplex index out of range");
}

double min_pairwise_gap(const Mat& a, const Mat& b) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    double d2 = (a.colwise() - b.col(j)).colwise().squaredNorm().minCoeff();
    best = std::min(best, d2);
  }
  return std::sqrt(best);
}

double sampling_resolution(const PointCloud& cloud) {
  const Mat& p = cloud.points;
  const Eigen::Index n = p.cols();
  if (n < 2) return 0.0;
  if (cloud.kind() == ShapeKind::Curve) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) worst = std::max(worst, (p.col((i + 1) % n) - p.col(i)).norm());
    return worst;
  }
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) nearest = std::min(nearest, (p.col(j) - p.col(i)).squaredNorm());
    worst = std::max(worst, nearest);
  }
  return std::sqrt(worst);
}

EmbeddedPair make_pair(PointCloud a, PointCloud b, std::optional<int> expected_degree,
                       double min_allowed_gap) {
  a.validate();
  b.validate();
  require(a.ambient_dim() == b.ambient_dim(), "pair sides have different ambient dimensions");
  EmbeddedPair pair{std::move(a), std::move(b), expected_degree, 0.0};
  pair.min_gap = min_pairwise_gap(pair.side_a.points, pair.side_b.points);
  if (!(pair.min_gap > min_allowed_gap))
    throw NumericFailure("pair sides are not disjoint (min gap " + std::to_string(pair.min_gap) + ")");
  return pair;
}

PointCloud sample_circle(const Vec& center, double radius, const Vec& u, const Vec& v,
                         std::size_t samples) {
  require(samples >= 3, "circle needs at least 3 samples");
  require(radius > 0.0, "circle radius must be positive");
  require(center.size() == u.size() && u.size() == v.size(), "circle frame dimension mismatch");
  PointCloud cloud;
  cloud.points.resize(center.size(), static_cast<Eigen::Index>(samples));
  Parametrization par;
  par.kind = ShapeKind::Curve;
  par.parameters.resize(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(samples);
    const double ang = 2.0 * std::numbers::pi * t;
    par.parameters[i] = t;
    cloud.points.col(static_cast<Eigen::Index>(i)) = center + radius * (std::cos(ang) * u + std::sin(ang) * v);
  }
  par.descriptor = {{"shape", "circle"},
                    {"center", std::vector<double>(center.data(), center.data() + center.size())},
                    {"radius", radius},
                    {"basis_u", std::vector<double>(u.data(), u.data() + u.size())},
                    {"basis_v", std::vector<double>(v.data(), v.data() + v.size())},
                    {"samples", samples}};
  cloud.parametrization = std::move(par);
  return cloud;
}

PointCloud sample_unit_sphere(int dim, std::size_t samples) {
  require(dim >= 2, "sphere dimension must be at least 2");
  PointCloud cloud;
  Parametrization par;
  par.kind = ShapeKind::Sphere;
  if (dim == 2) {
    require(samples >= 3, "circle needs at least 3 samples");
    Vec c = Vec::Zero(2), u = Vec::Unit(2, 0), v = Vec::Unit(2, 1);
    cloud = sample_circle(c, 1.0, u, v, samples);
    cloud.parametrization->kind = ShapeKind::Sphere;
    auto& simp = cloud.parametrization->simplices;
    for (std::size_t i = 0; i < samples; ++i) simp.push_back({i, (i + 1) % samples});
    cloud.parametrization->descriptor["shape"] = "unit-sphere";
    cloud.parametrization->descriptor["dim"] = dim;
    return cloud;
  }
  detail::SphereMesh mesh;
  if (dim == 3) {
    require(samples >= 4, "2-sphere needs at least 4 samples");
    mesh = detail::fibonacci_sphere(samples);
  } else if (dim == 4) {
    require(samples >= 8, "3-sphere needs at least 8 samples");
    mesh = detail::hopf_grid_sphere(samples);
  } else {
    require(samples >= static_cast<std::size_t>(dim) + 1, "too few sphere samples");
    mesh = detail::quasi_random_sphere(dim, samples);
  }
  cloud.points = std::move(mesh.points);
  par.simplices = std::move(mesh.simplices);
  par.descriptor = {{"shape", "unit-sphere"}, {"dim", dim}, {"method", mesh.method}, {"samples", cloud.points.cols()}};
  cloud.parametrization = std::move(par);
  return cloud;
}

PointCloud single_point(const Vec& p) {
  PointCloud cloud;
  cloud.points = p;
  Parametrization par;
  par.kind = ShapeKind::Point;
  par.descriptor = {{"shape", "point"}};
  cloud.parametrization = std::move(par);
  return cloud;
}

EmbeddedPair make_hopf_pair(double radius, std::size_t samples) {
  require(samples >= 8, "hopf pair needs at least 8 samples per side");
  require(radius > 0.0, "radius must be positive");
  const Vec e1 = Vec::Unit(3, 0), e2 = Vec::Unit(3, 1), e3 = Vec::Unit(3, 2);
  PointCloud a = sample_circle(Vec::Zero(3), radius, e1, e2, samples);
  // B runs through A's centre; the -z frame makes the linking number +1.
  PointCloud b = sample_circle(radius * e1, radius, e1, -e3, samples);
  return make_pair(std::move(a), std::move(b), 1);
}

EmbeddedPair make_sphere_point_pair(int dim, const Vec& center_offset, std::size_t samples) {
  require(dim >= 2, "sphere-point pair needs dim >= 2");
  require(center_offset.size() == dim, "center offset has wrong dimension");
  const double r = center_offset.norm();
  require(std::abs(r - 1.0) > 1e-9, "point lies on the sphere");
  return make_pair(sample_unit_sphere(dim, samples), single_point(center_offset), r < 1.0 ? 1 : 0);
}

EmbeddedPair translate_side_b(const EmbeddedPair& pair, const Vec& offset, std::optional<int> expected_degree) {
  require(offset.size() == pair.ambient_dim(), "offset dimension mismatch");
  PointCloud b = pair.side_b;
  b.points.colwise() += offset;
  if (b.parametrization) b.parametrization->descriptor["translated_by"] =
      std::vector<double>(offset.data(), offset.data() + offset.size());
  return make_pair(pair.side_a, std::move(b), expected_degree);
}

std::vector<std::string> builtin_pair_names() {
  return {"hopf", "hopf-reflected", "unlinked", "far-separated", "sphere-point-inside", "sphere-point-outside"};
}

EmbeddedPair builtin_pair(const std::string& name, std::size_t samples, int dim) {
  if (name == "hopf") return make_hopf_pair(1.0, samples);
  if (name == "hopf-reflected") {
    Mat refl = Vec::Ones(3).asDiagonal();
    refl(2, 2) = -1.0;
    return apply_homeomorphism(Homeomorphism::affine(refl, Vec::Zero(3)), make_hopf_pair(1.0, samples));
  }
  if (name == "unlinked") {
    // B pulled out so it no longer threads A; still close (gap 0.5).
    Vec off(3);
    off << 1.5, 0.0, 0.0;
    return translate_side_b(make_hopf_pair(1.0, samples), off, 0);
  }
  if (name == "far-separated") {
    Vec off(3);
    off << 10.0, 0.0, 0.0;
    return translate_side_b(make_hopf_pair(1.0, samples), off, 0);
  }
  if (name == "sphere-point-inside") return make_sphere_point_pair(dim, Vec::Zero(dim), samples);
  if (name == "sphere-point-outside") return make_sphere_point_pair(dim, 2.0 * Vec::Unit(dim, 0), samples);
  throw InvalidArgument("unknown builtin pair: " + name);
}

BallBoundaryTargets sample_ball_boundary_and_center(int dim, double delta, std::size_t samples) {
  require(dim >= 2, "ball dimension must be at least 2");
  require(delta > 0.0, "delta must be positive");
  BallBoundaryTargets out;
  out.sphere = sample_unit_sphere(dim, samples);
  out.center = single_point(Vec::Zero(dim));
  out.sphere_target = 2.0 * delta;
  out.center_target = 0.0;
  return out;
}

// ---------------------------------------------------------------------------

double MonotoneCoord::operator()(double x) const {
  switch (kind) {
    case Kind::Identity: return x;
    case Kind::SineShift: return x + a * std::sin(w * x);
    case Kind::Cubic: return x + a * x * x * x;
    case Kind::ArcSinh: return std::asinh(a * x) / a;
  }
  return x;
}

double MonotoneCoord::derivative(double x) const {
  switch (kind) {
    case Kind::Identity: return 1.0;
    case Kind::SineShift: return 1.0 + a * w * std::cos(w * x);
    case Kind::Cubic: return 1.0 + 3.0 * a * x * x;
    case Kind::ArcSinh: return 1.0 / std::sqrt(1.0 + a * a * x * x);
  }
  return 1.0;
}

MonotoneCoord MonotoneCoord::sine_shift(double amplitude, double frequency) {
  require(std::abs(amplitude * frequency) < 1.0, "sine shift must satisfy |a*w| < 1");
  return {Kind::SineShift, amplitude, frequency};
}

MonotoneCoord MonotoneCoord::cubic(double c) {
  require(c >= 0.0, "cubic coefficient must be nonnegative");
  return {Kind::Cubic, c, 1.0};
}

MonotoneCoord MonotoneCoord::arcsinh(double s) {
  require(s > 0.0, "arcsinh scale must be positive");
  return {Kind::ArcSinh, s, 1.0};
}

Homeomorphism Homeomorphism::identity(int dim) {
  return componentwise(std::vector<MonotoneCoord>(static_cast<std::size_t>(dim)));
}

Homeomorphism Homeomorphism::affine(Mat linear, Vec offset) {
  require(linear.rows() == linear.cols(), "affine homeomorphism must be square");
  require(offset.size() == linear.rows(), "affine offset dimension mismatch");
  require(std::abs(linear.determinant()) > 1e-12, "affine part is degenerate");
  Homeomorphism h;
  h.dim_ = static_cast<int>(linear.rows());
  h.rep_ = AffineMap{std::move(linear), std::move(offset)};
  return h;
}

Homeomorphism Homeomorphism::componentwise(std::vector<MonotoneCoord> coords) {
  require(!coords.empty(), "componentwise map needs at least one coordinate");
  Homeomorphism h;
  h.dim_ = static_cast<int>(coords.size());
  h.rep_ = ComponentwiseMap{std::move(coords)};
  return h;
}

Homeomorphism Homeomorphism::compose(std::vector<Homeomorphism> pieces) {
  require(!pieces.empty(), "composition needs at least one piece");
  const int d = pieces.front().dim();
  for (const auto& p : pieces) require(p.dim() == d, "composition pieces differ in dimension");
  Homeomorphism h;
  h.dim_ = d;
  h.rep_ = Composition{std::move(pieces)};
  return h;
}

int Homeomorphism::dim() const { return dim_; }

Vec Homeomorphism::apply(const Vec& x) const {
  require(x.size() == dim_, "homeomorphism input dimension mismatch");
  if (const auto* a = std::get_if<AffineMap>(&rep_)) return a->linear * x + a->offset;
  if (const auto* c = std::get_if<ComponentwiseMap>(&rep_)) {
    Vec y(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) y(i) = c->coords[static_cast<std::size_t>(i)](x(i));
    return y;
  }
  Vec y = x;
  for (const auto& p : std::get<Composition>(rep_).pieces) y = p.apply(y);
  return y;
}

Mat Homeomorphism::apply_columns(const Mat& xs) const {
  Mat out(xs.rows(), xs.cols());
  for (Eigen::Index j = 0; j < xs.cols(); ++j) out.col(j) = apply(xs.col(j));
  return out;
}

int Homeomorphism::orientation_sign() const {
  if (const auto* a = std::get_if<AffineMap>(&rep_)) return a->linear.determinant() > 0.0 ? 1 : -1;
  if (std::holds_alternative<ComponentwiseMap>(rep_)) return 1;
  int s = 1;
  for (const auto& p : std::get<Composition>(rep_).pieces) s *= p.orientation_sign();
  return s;
}

void Homeomorphism::validate(double radius) const {
  if (const auto* a = std::get_if<AffineMap>(&rep_)) {
    require(a->linear.allFinite() && a->offset.allFinite(), "affine map has non-finite entries");
    require(std::abs(a->linear.determinant()) > 1e-12, "affine part is degenerate");
    return;
  }
  if (const auto* c = std::get_if<ComponentwiseMap>(&rep_)) {
    constexpr int kProbes = 2001;
    for (const auto& f : c->coords) {
      double prev = f(-radius);
      for (int k = 1; k < kProbes; ++k) {
        const double x = -radius + 2.0 * radius * k / (kProbes - 1);
        const double d = f.derivative(x);
        require(d > 0.0 && std::isfinite(d), "componentwise map is not strictly increasing");
        const double y = f(x);
        require(y > prev, "componentwise map is not strictly increasing");
        prev = y;
      }
    }
    return;
  }
  for (const auto& p : std::get<Composition>(rep_).pieces) p.validate(radius);
}

std::string Homeomorphism::kind_name() const {
  if (std::holds_alternative<AffineMap>(rep_)) return "affine-invertible";
  if (std::holds_alternative<ComponentwiseMap>(rep_)) return "componentwise-smooth-monotone";
  return "composition";
}

EmbeddedPair apply_homeomorphism(const Homeomorphism& h, const EmbeddedPair& pair) {
  require(h.dim() == pair.ambient_dim(), "homeomorphism dimension does not match pair");
  const int sign = h.orientation_sign();
  auto map_side = [&](const PointCloud& side) {
    PointCloud out = side;
    out.points = h.apply_columns(side.points);
    out.orientation = side.orientation * sign;
    if (out.parametrization) out.parametrization->descriptor["mapped_by"] = h.kind_name();
    return out;
  };
  std::optional<int> deg = pair.expected_degree;
  if (deg) *deg *= sign;
  return make_pair(map_side(pair.side_a), map_side(pair.side_b), deg, 1e-12);
}

}  // namespace linkobs
