#pragma once

#include <Eigen/Dense>

namespace linkobs {

struct Ball {
  Eigen::VectorXd center;
  double radius = 0.0;

  bool contains(const Eigen::VectorXd& p, double tol = 1e-9) const;
  bool disjoint_from(const Ball& other) const;
};

/// Smallest ball enclosing the columns of `points` (Welzl's algorithm with
/// move-to-front; the insertion order is a fixed-seed shuffle, so results
/// are deterministic). Works in any dimension; intended for small ones.
Ball min_enclosing_ball(const Eigen::MatrixXd& points);

}  // namespace linkobs
