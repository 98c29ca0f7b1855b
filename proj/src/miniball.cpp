#include "linkobs/miniball.hpp"

#include <algorithm>
#include <list>
#include <numeric>
#include <random>
#include <vector>

#include "linkobs/error.hpp"

namespace linkobs {

bool Ball::contains(const Eigen::VectorXd& p, double tol) const {
  return (p - center).norm() <= radius * (1.0 + tol) + tol;
}

bool Ball::disjoint_from(const Ball& other) const {
  return (center - other.center).norm() > radius + other.radius;
}

namespace {

class MoveToFront {
 public:
  explicit MoveToFront(const Eigen::MatrixXd& pts) : pts_(pts), dim_(pts.rows()) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(pts.cols()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::mt19937 rng(0x3b1u);
    std::shuffle(order.begin(), order.end(), rng);
    list_.assign(order.begin(), order.end());
  }

  Ball run() {
    support_.clear();
    solve(list_.end());
    return Ball{center_, std::sqrt(std::max(radius2_, 0.0))};
  }

 private:
  void fit_support() {
    const std::size_t k = support_.size();
    if (k == 0) {
      center_ = Eigen::VectorXd::Zero(dim_);
      radius2_ = -1.0;
      return;
    }
    const Eigen::VectorXd p0 = pts_.col(support_[0]);
    if (k == 1) {
      center_ = p0;
      radius2_ = 0.0;
      return;
    }
    Eigen::MatrixXd Q(dim_, static_cast<Eigen::Index>(k - 1));
    for (std::size_t i = 1; i < k; ++i) Q.col(static_cast<Eigen::Index>(i - 1)) = pts_.col(support_[i]) - p0;
    const Eigen::MatrixXd G = Q.transpose() * Q;
    const Eigen::VectorXd rhs = 0.5 * Q.colwise().squaredNorm().transpose();
    const Eigen::VectorXd lambda = G.completeOrthogonalDecomposition().solve(rhs);
    center_ = p0 + Q * lambda;
    radius2_ = 0.0;
    for (auto idx : support_) radius2_ = std::max(radius2_, (pts_.col(idx) - center_).squaredNorm());
  }

  bool outside(Eigen::Index idx) const {
    if (radius2_ < 0.0) return true;
    const double d2 = (pts_.col(idx) - center_).squaredNorm();
    return d2 > radius2_ * (1.0 + 1e-12) + 1e-300;
  }

  void solve(std::list<Eigen::Index>::iterator end) {
    fit_support();
    if (support_.size() == static_cast<std::size_t>(dim_) + 1) return;
    for (auto k = list_.begin(); k != end;) {
      auto j = k++;
      if (outside(*j)) {
        support_.push_back(*j);
        solve(j);
        support_.pop_back();
        list_.splice(list_.begin(), list_, j);
      }
    }
  }

  const Eigen::MatrixXd& pts_;
  Eigen::Index dim_;
  std::list<Eigen::Index> list_;
  std::vector<Eigen::Index> support_;
  Eigen::VectorXd center_;
  double radius2_ = -1.0;
};

}  // namespace

Ball min_enclosing_ball(const Eigen::MatrixXd& points) {
  require(points.cols() > 0, "minimum enclosing ball of an empty set");
  Ball b = MoveToFront(points).run();
  // Floating point: grow the radius to cover every input point exactly.
  double r2 = 0.0;
  for (Eigen::Index i = 0; i < points.cols(); ++i) r2 = std::max(r2, (points.col(i) - b.center).squaredNorm());
  b.radius = std::sqrt(r2);
  return b;
}

}  // namespace linkobs
