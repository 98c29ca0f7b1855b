#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "linkobs/error.hpp"

namespace linkobs {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// What a sampled cloud is a sample of. Degree routines dispatch on this.
enum class ShapeKind { Curve, Sphere, Point, Generic };

std::string to_string(ShapeKind kind);
ShapeKind shape_kind_from_string(const std::string& s);

/// How each point of a cloud arose.
///
/// For closed curves `parameters[i]` is the curve parameter of point i in
/// [0,1) and consecutive points (cyclically) are joined by segments. For
/// sampled spheres S^{d-1}, `simplices` holds an oriented closed
/// triangulation: each entry lists d point indices whose vertex order is
/// positive for the outward orientation at generation time.
struct Parametrization {
  ShapeKind kind = ShapeKind::Generic;
  nlohmann::json descriptor = nlohmann::json::object();
  std::vector<double> parameters;
  std::vector<std::vector<std::size_t>> simplices;
};

/// Finite oriented sample of an embedded compact set. Points are the
/// columns of `points`.
struct PointCloud {
  Mat points;
  std::optional<Parametrization> parametrization;
  int orientation = 1;

  int ambient_dim() const { return static_cast<int>(points.rows()); }
  std::size_t size() const { return static_cast<std::size_t>(points.cols()); }
  Vec point(std::size_t i) const { return points.col(static_cast<Eigen::Index>(i)); }
  ShapeKind kind() const { return parametrization ? parametrization->kind : ShapeKind::Generic; }

  /// Throws InvalidArgument when a structural invariant fails.
  void validate() const;
};

/// Minimum distance between any point of `a` and any point of `b`.
double min_pairwise_gap(const Mat& a, const Mat& b);

/// Largest distance from a point to its nearest neighbour within the cloud.
/// For curves this is the largest consecutive segment length.
double sampling_resolution(const PointCloud& cloud);

struct EmbeddedPair {
  PointCloud side_a;
  PointCloud side_b;
  std::optional<int> expected_degree;
  double min_gap = 0.0;

  int ambient_dim() const { return side_a.ambient_dim(); }
};

/// Builds a pair and computes min_gap. Rejects dimension mismatch and
/// gaps at or below `min_allowed_gap`.
EmbeddedPair make_pair(PointCloud a, PointCloud b, std::optional<int> expected_degree,
                       double min_allowed_gap = 0.0);

// ---------------------------------------------------------------------------
// Generators

/// Closed circle in the plane spanned by orthonormal `u`, `v` through
/// `center`, sampled uniformly in parameter: c + r(cos 2πt u + sin 2πt v).
PointCloud sample_circle(const Vec& center, double radius, const Vec& u, const Vec& v,
                         std::size_t samples);

/// Near-uniform deterministic sample of the unit sphere S^{dim-1} centred at
/// the origin, with an oriented triangulation for dim <= 4. The realised
/// point count may differ from `samples` for dim 4 (grid-based).
PointCloud sample_unit_sphere(int dim, std::size_t samples);

PointCloud single_point(const Vec& p);

/// Circle A in the xy-plane about the origin and circle B in the xz-plane
/// about (radius,0,0), both of radius `radius`; linking number +1.
EmbeddedPair make_hopf_pair(double radius, std::size_t samples);

/// Unit sphere S^{dim-1} paired with one point. Degree 1 inside, 0 outside.
EmbeddedPair make_sphere_point_pair(int dim, const Vec& center_offset, std::size_t samples);

/// Translates side B rigidly. Expected degree is left to the caller.
EmbeddedPair translate_side_b(const EmbeddedPair& pair, const Vec& offset,
                              std::optional<int> expected_degree);

/// Builtin pairs: hopf, hopf-reflected, unlinked, far-separated,
/// sphere-point-inside, sphere-point-outside. `dim` applies to sphere pairs.
EmbeddedPair builtin_pair(const std::string& name, std::size_t samples, int dim = 3);
std::vector<std::string> builtin_pair_names();

/// Unit sphere and origin used by the approximation experiment, with the
/// targets 2δ on the sphere and 0 at the origin.
struct BallBoundaryTargets {
  PointCloud sphere;
  PointCloud center;
  double sphere_target = 0.0;
  double center_target = 0.0;
};

BallBoundaryTargets sample_ball_boundary_and_center(int dim, double delta, std::size_t samples = 1000);

// ---------------------------------------------------------------------------
// Homeomorphisms

struct AffineMap {
  Mat linear;
  Vec offset;
};

/// One strictly increasing scalar map.
struct MonotoneCoord {
  enum class Kind { Identity, SineShift, Cubic, ArcSinh };
  Kind kind = Kind::Identity;
  double a = 0.0;  // SineShift amplitude; Cubic coefficient; ArcSinh scale
  double w = 1.0;  // SineShift frequency

  double operator()(double x) const;
  double derivative(double x) const;

  static MonotoneCoord identity() { return {}; }
  /// x + amplitude·sin(frequency·x); requires |amplitude·frequency| < 1.
  static MonotoneCoord sine_shift(double amplitude, double frequency = 1.0);
  /// x + c·x³ with c >= 0.
  static MonotoneCoord cubic(double c);
  /// asinh(s·x)/s with s > 0.
  static MonotoneCoord arcsinh(double s);
};

struct ComponentwiseMap {
  std::vector<MonotoneCoord> coords;
};

/// Checkable homeomorphisms of R^n: invertible affine maps, componentwise
/// strictly monotone smooth maps, and compositions of these (applied in
/// list order, first piece first).
class Homeomorphism {
 public:
  static Homeomorphism identity(int dim);
  static Homeomorphism affine(Mat linear, Vec offset);
  static Homeomorphism componentwise(std::vector<MonotoneCoord> coords);
  static Homeomorphism compose(std::vector<Homeomorphism> pieces);

  int dim() const;
  Vec apply(const Vec& x) const;
  Mat apply_columns(const Mat& xs) const;

  /// +1 when orientation preserving, -1 when reversing.
  int orientation_sign() const;

  /// Samples derivatives of the componentwise parts on [-radius, radius]
  /// and checks affine determinants. Throws InvalidArgument on failure.
  void validate(double radius = 10.0) const;

  std::string kind_name() const;

 private:
  struct Composition {
    std::vector<Homeomorphism> pieces;
  };
  std::variant<AffineMap, ComponentwiseMap, Composition> rep_;
  int dim_ = 0;
};

/// Applies `h` to both sides; expected degree flips sign for orientation
/// reversing maps. Throws NumericFailure if the sides collapse together.
EmbeddedPair apply_homeomorphism(const Homeomorphism& h, const EmbeddedPair& pair);

/// Applies an arbitrary pointwise map to a cloud, keeping its metadata.
template <typename F>
PointCloud map_cloud(const PointCloud& cloud, F&& f) {
  PointCloud out = cloud;
  if (cloud.points.cols() == 0) return out;
  Vec first = f(Vec(cloud.points.col(0)));
  out.points.resize(first.size(), cloud.points.cols());
  out.points.col(0) = first;
  for (Eigen::Index i = 1; i < cloud.points.cols(); ++i) out.points.col(i) = f(Vec(cloud.points.col(i)));
  return out;
}

}  // namespace linkobs
