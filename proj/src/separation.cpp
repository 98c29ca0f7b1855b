#include "linkobs/separation.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

namespace linkobs {

std::string to_string(SeparationMethod m) {
  switch (m) {
    case SeparationMethod::Interval1d: return "interval-1d";
    case SeparationMethod::BoundingBall: return "bounding-ball";
    case SeparationMethod::MinGapThreshold: return "min-gap-threshold";
  }
  return "interval-1d";
}

namespace {

ClosestPair closest_pair_1d(const Mat& a, const Mat& b) {
  // Merge sorted values; the closest cross pair is adjacent in the merge.
  struct Tagged {
    double v;
    Eigen::Index idx;
    bool from_a;
  };
  std::vector<Tagged> all;
  all.reserve(static_cast<std::size_t>(a.cols() + b.cols()));
  for (Eigen::Index i = 0; i < a.cols(); ++i) all.push_back({a(0, i), i, true});
  for (Eigen::Index j = 0; j < b.cols(); ++j) all.push_back({b(0, j), j, false});
  std::sort(all.begin(), all.end(), [](const Tagged& x, const Tagged& y) {
    if (x.v != y.v) return x.v < y.v;
    if (x.from_a != y.from_a) return x.from_a;
    return x.idx < y.idx;
  });
  ClosestPair best{std::numeric_limits<double>::infinity(), 0, 0};
  for (std::size_t k = 1; k < all.size(); ++k) {
    const auto& p = all[k - 1];
    const auto& q = all[k];
    if (p.from_a == q.from_a) continue;
    const double d = q.v - p.v;
    if (d < best.distance) best = {d, p.from_a ? p.idx : q.idx, p.from_a ? q.idx : p.idx};
  }
  return best;
}

}  // namespace

ClosestPair closest_pair(const Mat& a, const Mat& b) {
  require(a.rows() == b.rows(), "closest pair: dimension mismatch");
  require(a.cols() > 0 && b.cols() > 0, "closest pair: empty set");
  if (a.rows() == 1) return closest_pair_1d(a, b);
  ClosestPair best{std::numeric_limits<double>::infinity(), 0, 0};
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    Eigen::Index i = 0;
    const double d2 = (a.colwise() - b.col(j)).colwise().squaredNorm().minCoeff(&i);
    if (d2 < best.distance) best = {d2, i, j};
  }
  best.distance = std::sqrt(best.distance);
  return best;
}

double default_separation_threshold(const PointCloud& img_a, const PointCloud& img_b) {
  auto resolution = [](const PointCloud& c) {
    if (c.ambient_dim() == 1 && c.kind() != ShapeKind::Curve) {
      std::vector<double> v(c.points.data(), c.points.data() + c.points.size());
      std::sort(v.begin(), v.end());
      double worst = 0.0;
      for (std::size_t k = 1; k < v.size(); ++k) worst = std::max(worst, v[k] - v[k - 1]);
      return worst;
    }
    return sampling_resolution(c);
  };
  return 10.0 * std::max(resolution(img_a), resolution(img_b));
}

SeparationReport check_separation(const PointCloud& img_a, const PointCloud& img_b, double threshold) {
  require(img_a.size() > 0 && img_b.size() > 0, "separation check on an empty image");
  require(img_a.ambient_dim() == img_b.ambient_dim(), "images live in different dimensions");
  SeparationReport rep;
  rep.threshold = threshold > 0.0 ? threshold : default_separation_threshold(img_a, img_b);

  const ClosestPair cp = closest_pair(img_a.points, img_b.points);
  rep.min_inter_gap = cp.distance;
  auto set_witness = [&] { rep.witness = std::make_pair(img_a.point(static_cast<std::size_t>(cp.index_a)),
                                                        img_b.point(static_cast<std::size_t>(cp.index_b))); };

  if (img_a.ambient_dim() == 1) {
    rep.method = SeparationMethod::Interval1d;
    const double a_lo = img_a.points.minCoeff(), a_hi = img_a.points.maxCoeff();
    const double b_lo = img_b.points.minCoeff(), b_hi = img_b.points.maxCoeff();
    if (a_hi < b_lo || b_hi < a_lo) {
      rep.separated = true;
      Ball ba{Vec::Constant(1, 0.5 * (a_lo + a_hi)), 0.5 * (a_hi - a_lo)};
      Ball bb{Vec::Constant(1, 0.5 * (b_lo + b_hi)), 0.5 * (b_hi - b_lo)};
      rep.ball_certificate = std::make_pair(ba, bb);
    } else {
      set_witness();
    }
    return rep;
  }

  Ball ba = min_enclosing_ball(img_a.points);
  Ball bb = min_enclosing_ball(img_b.points);
  if (ba.disjoint_from(bb)) {
    rep.separated = true;
    rep.method = SeparationMethod::BoundingBall;
    rep.ball_certificate = std::make_pair(std::move(ba), std::move(bb));
    return rep;
  }
  rep.method = SeparationMethod::MinGapThreshold;
  rep.indeterminate = !(cp.distance < rep.threshold);
  set_witness();
  return rep;
}

bool certificate_holds(const SeparationReport& report, const PointCloud& img_a, const PointCloud& img_b) {
  if (!report.separated) return false;
  if (!report.ball_certificate) return false;
  const auto& [ba, bb] = *report.ball_certificate;
  if (!ba.disjoint_from(bb)) return false;
  for (std::size_t i = 0; i < img_a.size(); ++i)
    if (!ba.contains(img_a.point(i), 1e-12)) return false;
  for (std::size_t j = 0; j < img_b.size(); ++j)
    if (!bb.contains(img_b.point(j), 1e-12)) return false;
  return true;
}

}  // namespace linkobs
