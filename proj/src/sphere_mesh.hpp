#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace linkobs::detail {

struct SphereMesh {
  Eigen::MatrixXd points;
  std::vector<std::vector<std::size_t>> simplices;
  std::string method;
};

// Fibonacci lattice on S^2, triangulated by its convex hull.
SphereMesh fibonacci_sphere(std::size_t samples);

// S^3 via Hopf coordinates (eta, xi1, xi2) on a grid with the Kuhn
// triangulation of each cell; collapsed cells are dropped.
SphereMesh hopf_grid_sphere(std::size_t samples);

// Higher spheres: normalised Halton points, no triangulation.
SphereMesh quasi_random_sphere(int dim, std::size_t samples);

// Outward-oriented convex hull triangles of points in R^3.
std::vector<std::vector<std::size_t>> convex_hull_3d(const Eigen::MatrixXd& points);

}  // namespace linkobs::detail
