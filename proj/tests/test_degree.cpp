#include <doctest.h>

#include <cmath>
#include <random>

#include "linkobs/degree.hpp"

using namespace linkobs;

namespace {

// Oracle 1: signed crossings of the xy-projection where A passes over B.
int crossing_count(const Mat& a, const Mat& b) {
  int total = 0;
  const Eigen::Index na = a.cols(), nb = b.cols();
  for (Eigen::Index i = 0; i < na; ++i) {
    const Eigen::Vector3d p = a.col(i), r = a.col((i + 1) % na) - a.col(i);
    for (Eigen::Index j = 0; j < nb; ++j) {
      const Eigen::Vector3d q = b.col(j), s = b.col((j + 1) % nb) - b.col(j);
      const double den = r.x() * s.y() - r.y() * s.x();
      if (den == 0.0) continue;
      const Eigen::Vector3d qp = q - p;
      const double t = (qp.x() * s.y() - qp.y() * s.x()) / den;
      const double u = (qp.x() * r.y() - qp.y() * r.x()) / den;
      if (t < 0.0 || t >= 1.0 || u < 0.0 || u >= 1.0) continue;
      const double za = p.z() + t * r.z(), zb = q.z() + u * s.z();
      if (za <= zb) continue;
      total += den > 0.0 ? 1 : -1;
    }
  }
  return total;
}

// Oracle 2: midpoint rule for the Gauss double integral.
double midpoint_gauss(const Mat& a, const Mat& b) {
  double total = 0.0;
  const Eigen::Index na = a.cols(), nb = b.cols();
  for (Eigen::Index i = 0; i < na; ++i) {
    const Eigen::Vector3d da = a.col((i + 1) % na) - a.col(i);
    const Eigen::Vector3d ma = 0.5 * (a.col((i + 1) % na) + a.col(i));
    for (Eigen::Index j = 0; j < nb; ++j) {
      const Eigen::Vector3d db = b.col((j + 1) % nb) - b.col(j);
      const Eigen::Vector3d mb = 0.5 * (b.col((j + 1) % nb) + b.col(j));
      const Eigen::Vector3d d = ma - mb;
      total += d.dot(da.cross(db)) / std::pow(d.norm(), 3);
    }
  }
  return total / (4.0 * M_PI);
}

Mat random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  return q.normalized().toRotationMatrix();
}

}  // namespace

TEST_CASE("gauss map examples") {
  PointCloud a = single_point((Vec(3) << 1, 0, 0).finished());
  PointCloud b = single_point(Vec::Zero(3));
  EmbeddedPair p = make_pair(a, b, std::nullopt);
  CHECK((gauss_map(p, 0, 0) - Vec::Unit(3, 0)).norm() < 1e-15);
  p = make_pair(single_point(Vec::Zero(3)), single_point((Vec(3) << 3, 4, 0).finished()), std::nullopt);
  CHECK((gauss_map(p, 0, 0) - (Vec(3) << -0.6, -0.8, 0).finished()).norm() < 1e-15);
  CHECK(std::abs(gauss_map(p, 0, 0).norm() - 1.0) < 1e-12);
  CHECK_THROWS_AS(gauss_map(p, 1, 0), InvalidArgument);

  // on the unit sphere with the origin as the point, ξ(x, O) = x
  const EmbeddedPair sp = make_sphere_point_pair(3, Vec::Zero(3), 200);
  for (std::size_t i = 0; i < sp.side_a.size(); i += 17)
    CHECK((gauss_map(sp, i, 0) - sp.side_a.point(i)).norm() < 1e-12);
}

TEST_CASE("linking numbers of the builtin curve pairs") {
  const DegreeReport hopf = linking_number(builtin_pair("hopf", 512));
  CHECK(hopf.rounded == 1);
  CHECK(hopf.residual < 1e-3);
  CHECK(hopf.samples_used == 1024);
  CHECK(linking_number(builtin_pair("hopf-reflected", 512)).rounded == -1);
  const DegreeReport far = linking_number(builtin_pair("far-separated", 512));
  CHECK(far.rounded == 0);
  CHECK(far.residual < 1e-3);
  CHECK(linking_number(builtin_pair("unlinked", 128)).rounded == 0);
}

TEST_CASE("linking number agrees with the crossing-count oracle") {
  std::mt19937_64 rng(11);
  for (const std::string name : {"hopf", "hopf-reflected", "unlinked", "far-separated"}) {
    const EmbeddedPair p = builtin_pair(name, 96);
    for (int k = 0; k < 5; ++k) {
      const Mat R = random_rotation(rng);
      const Mat a = R * p.side_a.points, b = R * p.side_b.points;
      const EmbeddedPair q = make_pair({a, p.side_a.parametrization, 1}, {b, p.side_b.parametrization, 1}, std::nullopt);
      CAPTURE(name);
      CHECK(linking_number(q).rounded == crossing_count(a, b));
      CHECK(crossing_count(a, b) == *p.expected_degree);
    }
  }
}

TEST_CASE("linking number agrees with the midpoint Gauss integral") {
  for (std::size_t n : {64, 256}) {
    const EmbeddedPair p = builtin_pair("hopf", n);
    const double oracle = midpoint_gauss(p.side_a.points, p.side_b.points);
    CHECK(std::abs(oracle - linking_number(p).estimate) < 64.0 / static_cast<double>(n * n) + 1e-3);
  }
}

TEST_CASE("sphere-point degrees") {
  for (int dim : {2, 3, 4}) {
    CAPTURE(dim);
    CHECK(sphere_point_degree(builtin_pair("sphere-point-inside", 400, dim)).rounded == 1);
    CHECK(sphere_point_degree(builtin_pair("sphere-point-outside", 400, dim)).rounded == 0);
  }
  const DegreeReport w = sphere_point_degree(make_sphere_point_pair(2, (Vec(2) << 0.5, 0).finished(), 64));
  CHECK(w.rounded == 1);
  CHECK(w.method == DegreeMethod::WindingAngleSum);
  CHECK(sphere_point_degree(make_sphere_point_pair(3, (Vec(3) << 0.3, -0.4, 0.2).finished(), 300)).rounded == 1);
  CHECK(sphere_point_degree(make_sphere_point_pair(4, (Vec(4) << 0.1, 0.2, -0.3, 0.1).finished(), 600)).rounded == 1);
}

TEST_CASE("winding number matches a raw angle sum") {
  const EmbeddedPair p = make_sphere_point_pair(2, (Vec(2) << -0.3, 0.6).finished(), 50);
  double sum = 0.0;
  const Mat& c = p.side_a.points;
  for (Eigen::Index i = 0; i < c.cols(); ++i) {
    const Eigen::Vector2d u = c.col(i) - p.side_b.point(0), v = c.col((i + 1) % c.cols()) - p.side_b.point(0);
    sum += std::atan2(u.x() * v.y() - u.y() * v.x(), u.dot(v));
  }
  CHECK(sphere_point_degree(p).estimate == doctest::Approx(sum / (2 * M_PI)).epsilon(1e-12));
}

TEST_CASE("degree errors") {
  CHECK_THROWS_AS(make_degree_report(0.5, DegreeMethod::GaussLinkingIntegral, 10), NumericFailure);
  CHECK_THROWS_AS(make_degree_report(std::nan(""), DegreeMethod::GaussLinkingIntegral, 10), NumericFailure);
  CHECK(make_degree_report(-1.2, DegreeMethod::GaussLinkingIntegral, 10).rounded == -1);
  CHECK_THROWS_AS(linking_number(builtin_pair("sphere-point-inside", 100, 3)), InvalidArgument);
  CHECK_THROWS_AS(sphere_point_degree(builtin_pair("hopf", 64)), InvalidArgument);
  CHECK_THROWS_AS(pair_degree(make_pair(sample_unit_sphere(5, 50), single_point(Vec::Zero(5)), 1)), InvalidArgument);
  CHECK_FALSE(has_defined_degree(make_pair(sample_unit_sphere(5, 50), single_point(Vec::Zero(5)), 1)));
  CHECK(has_defined_degree(builtin_pair("hopf", 32)));
}

TEST_CASE("degree is invariant under homeomorphisms up to orientation") {
  const EmbeddedPair p = builtin_pair("hopf", 128);
  const Homeomorphism h = Homeomorphism::componentwise(
      {MonotoneCoord::sine_shift(0.3, 1.0), MonotoneCoord::cubic(0.5), MonotoneCoord::arcsinh(1.5)});
  CHECK(linking_number(apply_homeomorphism(h, p)).rounded == 1);
  Mat m = Mat::Identity(3, 3);
  m(0, 0) = -2.0;
  CHECK(linking_number(apply_homeomorphism(Homeomorphism::affine(m, Vec::Ones(3)), p)).rounded == -1);

  const EmbeddedPair s = builtin_pair("sphere-point-inside", 300, 3);
  CHECK(sphere_point_degree(apply_homeomorphism(h, s)).rounded == 1);
}

TEST_CASE("projection probe on the hopf pair") {
  const EmbeddedPair p = builtin_pair("hopf", 256);
  for (int m : {1, 2}) {
    const ProjectionProbeResult r = projection_probe(p, m);
    CHECK_FALSE(r.report.separated);
    REQUIRE(r.homotopy_trace.size() == 11);
    CHECK(r.homotopy_trace.front().second == doctest::Approx(p.min_gap));
    // the collapsed images touch, up to sampling
    CHECK(r.homotopy_trace.back().second < 0.05);
  }
  CHECK(projection_probe(builtin_pair("far-separated", 128), 1).report.separated);
  CHECK_THROWS_AS(projection_probe(p, 3), InvalidArgument);
}
