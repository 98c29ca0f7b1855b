#include "sphere_mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <utility>

namespace linkobs::detail {

namespace {

double orient3(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
               const Eigen::Vector3d& p) {
  return (b - a).cross(c - a).dot(p - a);
}

double radical_inverse(std::size_t i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

}  // namespace

std::vector<std::vector<std::size_t>> convex_hull_3d(const Eigen::MatrixXd& points) {
  const std::size_t n = static_cast<std::size_t>(points.cols());
  if (n < 4) throw std::invalid_argument("convex hull needs at least 4 points");
  auto P = [&](std::size_t i) -> Eigen::Vector3d { return points.col(static_cast<Eigen::Index>(i)); };

  // Initial tetrahedron from the first non-degenerate quadruple.
  std::size_t i0 = 0, i1 = 1, i2 = n, i3 = n;
  for (std::size_t k = 2; k < n && i2 == n; ++k)
    if ((P(i1) - P(i0)).cross(P(k) - P(i0)).norm() > 1e-12) i2 = k;
  if (i2 == n) throw std::invalid_argument("points are collinear");
  for (std::size_t k = 2; k < n && i3 == n; ++k)
    if (k != i2 && std::abs(orient3(P(i0), P(i1), P(i2), P(k))) > 1e-14) i3 = k;
  if (i3 == n) throw std::invalid_argument("points are coplanar");

  struct Face {
    std::array<std::size_t, 3> v;
    bool alive = true;
  };
  std::vector<Face> faces;
  auto add_face = [&](std::size_t a, std::size_t b, std::size_t c) { faces.push_back({{a, b, c}, true}); };
  if (orient3(P(i0), P(i1), P(i2), P(i3)) < 0.0) {
    add_face(i0, i1, i2);
    add_face(i0, i3, i1);
    add_face(i1, i3, i2);
    add_face(i2, i3, i0);
  } else {
    add_face(i0, i2, i1);
    add_face(i0, i1, i3);
    add_face(i1, i2, i3);
    add_face(i2, i0, i3);
  }

  for (std::size_t p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::set<std::pair<std::size_t, std::size_t>> visible_edges;
    std::vector<std::size_t> visible;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!faces[f].alive) continue;
      const auto& v = faces[f].v;
      if (orient3(P(v[0]), P(v[1]), P(v[2]), P(p)) > 1e-15) {
        visible.push_back(f);
        for (int e = 0; e < 3; ++e) visible_edges.insert({v[e], v[(e + 1) % 3]});
      }
    }
    if (visible.empty()) continue;  // interior point
    for (auto f : visible) faces[f].alive = false;
    for (const auto& [a, b] : visible_edges)
      if (!visible_edges.count({b, a})) add_face(a, b, p);
  }

  std::vector<std::vector<std::size_t>> out;
  for (const auto& f : faces)
    if (f.alive) out.push_back({f.v[0], f.v[1], f.v[2]});
  return out;
}

SphereMesh fibonacci_sphere(std::size_t samples) {
  SphereMesh mesh;
  mesh.method = "fibonacci-lattice";
  mesh.points.resize(3, static_cast<Eigen::Index>(samples));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < samples; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(samples);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    mesh.points.col(static_cast<Eigen::Index>(i)) << r * std::cos(phi), r * std::sin(phi), z;
  }
  mesh.simplices = convex_hull_3d(mesh.points);
  return mesh;
}

SphereMesh hopf_grid_sphere(std::size_t samples) {
  // Roughly uniform spacing: eta spans pi/2, the two angles span 2pi.
  const int m = std::max(4, static_cast<int>(std::lround(std::cbrt(4.0 * static_cast<double>(samples)))));
  const int na = std::max(2, m / 4);

  SphereMesh mesh;
  mesh.method = "hopf-grid";
  std::map<std::array<int, 3>, std::size_t> index;
  std::vector<Eigen::Vector4d> pts;
  auto canonical = [&](int a, int b, int c) -> std::array<int, 3> {
    b = ((b % m) + m) % m;
    c = ((c % m) + m) % m;
    if (a == 0) c = 0;
    if (a == na) b = 0;
    return {a, b, c};
  };
  auto vertex = [&](int a, int b, int c) {
    auto key = canonical(a, b, c);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    const double eta = 0.5 * std::numbers::pi * key[0] / na;
    const double x1 = 2.0 * std::numbers::pi * key[1] / m;
    const double x2 = 2.0 * std::numbers::pi * key[2] / m;
    pts.emplace_back(std::cos(eta) * std::cos(x1), std::cos(eta) * std::sin(x1), std::sin(eta) * std::cos(x2),
                     std::sin(eta) * std::sin(x2));
    index.emplace(key, pts.size() - 1);
    return pts.size() - 1;
  };

  const std::array<std::array<int, 3>, 6> perms{{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  const std::array<int, 6> parity{1, -1, -1, 1, 1, -1};
  struct Tet {
    std::array<std::size_t, 4> v;
    int sign;
  };
  std::vector<Tet> tets;
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (std::size_t k = 0; k < perms.size(); ++k) {
          std::array<int, 3> cur{a, b, c};
          std::array<std::size_t, 4> v{};
          v[0] = vertex(cur[0], cur[1], cur[2]);
          for (int s = 0; s < 3; ++s) {
            cur[static_cast<std::size_t>(perms[k][static_cast<std::size_t>(s)])] += 1;
            v[static_cast<std::size_t>(s) + 1] = vertex(cur[0], cur[1], cur[2]);
          }
          std::set<std::size_t> distinct(v.begin(), v.end());
          if (distinct.size() == 4) tets.push_back({v, parity[k]});
        }

  mesh.points.resize(4, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) mesh.points.col(static_cast<Eigen::Index>(i)) = pts[i];

  // The parametrisation has a fixed Jacobian sign; align it with the
  // outward orientation using the largest-volume cone.
  double best = 0.0;
  int global = 1;
  for (const auto& t : tets) {
    Eigen::Matrix4d M;
    for (int j = 0; j < 4; ++j) M.col(j) = pts[t.v[static_cast<std::size_t>(j)]];
    const double det = M.determinant();
    if (std::abs(det) > std::abs(best)) {
      best = det;
      global = (det > 0.0 ? 1 : -1) * t.sign;
    }
  }
  for (const auto& t : tets) {
    std::vector<std::size_t> s(t.v.begin(), t.v.end());
    if (t.sign * global < 0) std::swap(s[0], s[1]);
    mesh.simplices.push_back(std::move(s));
  }
  return mesh;
}

SphereMesh quasi_random_sphere(int dim, std::size_t samples) {
  static constexpr std::array<unsigned, 16> primes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  if (dim > static_cast<int>(primes.size())) throw std::invalid_argument("sphere dimension too large");
  SphereMesh mesh;
  mesh.method = "halton-gaussian";
  mesh.points.resize(dim, static_cast<Eigen::Index>(samples));
  // Box-Muller on pairs of Halton coordinates, then normalise.
  std::size_t filled = 0;
  for (std::size_t i = 1; filled < samples; ++i) {
    Eigen::VectorXd g(dim);
    for (int d = 0; d < dim; d += 2) {
      const double u1 = radical_inverse(i, primes[static_cast<std::size_t>(d)]);
      const double u2 = d + 1 < dim ? radical_inverse(i, primes[static_cast<std::size_t>(d) + 1]) : 0.25;
      const double rad = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
      g(d) = rad * std::cos(2.0 * std::numbers::pi * u2);
      if (d + 1 < dim) g(d + 1) = rad * std::sin(2.0 * std::numbers::pi * u2);
    }
    const double nrm = g.norm();
    if (nrm < 1e-12) continue;
    mesh.points.col(static_cast<Eigen::Index>(filled++)) = g / nrm;
  }
  return mesh;
}

}  // namespace linkobs::detail
