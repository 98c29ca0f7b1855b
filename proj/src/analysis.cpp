#include "linkobs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace linkobs {

SeparationReport classify_check(const MLP& net, const EmbeddedPair& pair, double threshold) {
  require(net.input_dim() == pair.ambient_dim(), "network input dimension does not match pair");
  return check_separation(image_of(net, pair.side_a), image_of(net, pair.side_b), threshold);
}

SeparationReport linear_map_check(const EmbeddedPair& pair, const Mat& linear, double threshold) {
  require(linear.cols() == pair.ambient_dim(), "linear map input dimension does not match pair");
  require(linear.rows() < linear.cols(), "linear map must reduce dimension (m < n)");
  auto map = [&](const PointCloud& c) {
    PointCloud out = c;
    out.points = linear * c.points;
    if (out.parametrization) {
      out.parametrization->simplices.clear();
      out.parametrization->descriptor["mapped_by"] = "linear";
    }
    return out;
  };
  return check_separation(map(pair.side_a), map(pair.side_b), threshold);
}

SeparationReport conjugate_map_check(const EmbeddedPair& pair, const Mat& linear, const Homeomorphism& pre,
                                     const Homeomorphism& post, double threshold) {
  require(pre.dim() == pair.ambient_dim() && linear.cols() == pre.dim(), "pre-map dimension mismatch");
  require(post.dim() == linear.rows(), "post-map dimension mismatch");
  require(linear.rows() < linear.cols(), "conjugated map must reduce dimension (m < n)");
  auto map = [&](const PointCloud& c) {
    PointCloud out = c;
    out.points = post.apply_columns(linear * pre.apply_columns(c.points));
    if (out.parametrization) {
      out.parametrization->simplices.clear();
      out.parametrization->descriptor["mapped_by"] = "conjugate-linear";
    }
    return out;
  };
  return check_separation(map(pair.side_a), map(pair.side_b), threshold);
}

namespace {

// Pattern search on the unit sphere for a larger |Net(x) - target|.
// Every accepted point is on the sphere, so the result stays a lower bound
// for the continuum sup; it only removes slack between samples.
std::pair<double, Vec> polish_on_sphere(const MLP& net, Vec x, double target, double step) {
  const int n = static_cast<int>(x.size());
  auto err = [&](const Vec& y) { return std::abs(net.forward(y)(0) - target); };
  double best = err(x);
  while (step > 1e-9) {
    bool moved = false;
    for (int i = 0; i < n && !moved; ++i) {
      for (double sgn : {1.0, -1.0}) {
        Vec y = x;
        y(i) += sgn * step;
        y.normalize();
        const double e = err(y);
        if (e > best) {
          best = e;
          x = y;
          moved = true;
          break;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return {best, x};
}

}  // namespace

ApproxGapReport approximation_gap(const MLP& net, int dim, double delta, std::size_t sphere_samples,
                                  int polish_starts) {
  require(net.input_dim() == dim, "network input dimension does not match ball dimension");
  require(net.output_dim() == 1, "approximation gap needs scalar network output");
  require(polish_starts >= 0, "polish_starts must be nonnegative");
  const BallBoundaryTargets tgt = sample_ball_boundary_and_center(dim, delta, sphere_samples);
  const Mat on_sphere = net.forward_batch(tgt.sphere.points);
  const double at_origin = net.forward(tgt.center.point(0))(0);

  ApproxGapReport rep;
  rep.delta = delta;
  rep.net_at_origin = at_origin;
  rep.net_range_on_sphere = {on_sphere.minCoeff(), on_sphere.maxCoeff()};

  const Eigen::Index m = on_sphere.cols();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) order[static_cast<std::size_t>(i)] = i;
  auto sphere_err = [&](Eigen::Index i) { return std::abs(on_sphere(0, i) - tgt.sphere_target); };
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return sphere_err(i) > sphere_err(j); });
  double best = sphere_err(order.front());
  Vec best_x = tgt.sphere.point(static_cast<std::size_t>(order.front()));

  // start from the worst samples and, separately, from the extremes of Net
  // on both sides of the target
  std::vector<Eigen::Index> starts(order.begin(), order.begin() + std::min<Eigen::Index>(polish_starts, m));
  if (polish_starts > 0) {
    Eigen::Index lo = 0, hi = 0;
    on_sphere.row(0).minCoeff(&lo);
    on_sphere.row(0).maxCoeff(&hi);
    starts.push_back(lo);
    starts.push_back(hi);
  }
  const double step = std::max(sampling_resolution(tgt.sphere), 1e-3);
  for (Eigen::Index i : starts) {
    auto [e, x] = polish_on_sphere(net, tgt.sphere.point(static_cast<std::size_t>(i)), tgt.sphere_target, step);
    const double v = net.forward(x)(0);
    rep.net_range_on_sphere.first = std::min(rep.net_range_on_sphere.first, v);
    rep.net_range_on_sphere.second = std::max(rep.net_range_on_sphere.second, v);
    if (e > best) {
      best = e;
      best_x = x;
    }
  }

  const double origin_err = std::abs(at_origin - tgt.center_target);
  if (origin_err >= best) {
    rep.sup_error_lower_bound = origin_err;
    rep.argmax_point = tgt.center.point(0);
  } else {
    rep.sup_error_lower_bound = best;
    rep.argmax_point = best_x;
  }
  if (!std::isfinite(rep.sup_error_lower_bound)) throw NumericFailure("network output is not finite");
  return rep;
}

TrainingData approximation_data(int dim, double delta, std::size_t sphere_samples) {
  const BallBoundaryTargets tgt = sample_ball_boundary_and_center(dim, delta, sphere_samples);
  TrainingData d;
  const Eigen::Index n = tgt.sphere.points.cols();
  d.inputs.resize(dim, n + 1);
  d.inputs << tgt.sphere.points, tgt.center.points;
  d.targets.resize(1, n + 1);
  d.targets.leftCols(n).setConstant(tgt.sphere_target);
  d.targets(0, n) = tgt.center_target;
  // The origin carries as much weight as the whole sphere.
  d.weights = Vec::Ones(n + 1);
  d.weights(n) = static_cast<double>(n);
  return d;
}

Mat random_linear_map(int m, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat L(m, n);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < n; ++c) L(r, c) = normal(rng);
  return L;
}

Mat random_full_rank_map(int m, int n, std::mt19937_64& rng) {
  for (;;) {
    Mat L = random_linear_map(m, n, rng);
    Eigen::JacobiSVD<Mat> svd(L);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) > 1e-3 * sv(0)) return L;
  }
}

Homeomorphism random_monotone_homeomorphism(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<MonotoneCoord> coords;
  for (int i = 0; i < dim; ++i) {
    const double pick = unit(rng);
    if (pick < 1.0 / 3.0) {
      const double w = 0.5 + 2.0 * unit(rng);
      const double a = (0.9 * unit(rng)) / w * (unit(rng) < 0.5 ? -1.0 : 1.0);
      coords.push_back(MonotoneCoord::sine_shift(a, w));
    } else if (pick < 2.0 / 3.0) {
      coords.push_back(MonotoneCoord::cubic(2.0 * unit(rng)));
    } else {
      coords.push_back(MonotoneCoord::arcsinh(0.2 + 2.0 * unit(rng)));
    }
  }
  return Homeomorphism::componentwise(std::move(coords));
}

}  // namespace linkobs
