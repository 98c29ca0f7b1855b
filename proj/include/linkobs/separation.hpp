#pragma once

#include <optional>
#include <string>
#include <utility>

#include "linkobs/geometry.hpp"
#include "linkobs/miniball.hpp"

namespace linkobs {

enum class SeparationMethod { Interval1d, BoundingBall, MinGapThreshold };

std::string to_string(SeparationMethod m);

struct SeparationReport {
  bool separated = false;
  /// Set when the sample gap is at least the threshold but the enclosing
  /// balls still overlap. Such cases are reported as not separated.
  bool indeterminate = false;
  double min_inter_gap = 0.0;
  double threshold = 0.0;
  std::optional<std::pair<Vec, Vec>> witness;
  std::optional<std::pair<Ball, Ball>> ball_certificate;
  SeparationMethod method = SeparationMethod::Interval1d;
};

/// Closest pair of points between two clouds.
struct ClosestPair {
  double distance = 0.0;
  Eigen::Index index_a = 0;
  Eigen::Index index_b = 0;
};
ClosestPair closest_pair(const Mat& a, const Mat& b);

/// Default decision threshold: ten times the coarser sampling resolution of
/// the two images.
double default_separation_threshold(const PointCloud& img_a, const PointCloud& img_b);

/// Decides whether two images can be enclosed in disjoint balls. A
/// non-positive `threshold` selects default_separation_threshold.
SeparationReport check_separation(const PointCloud& img_a, const PointCloud& img_b, double threshold = 0.0);

/// Re-checks a separated verdict against the raw images: the balls are
/// disjoint and each contains its image.
bool certificate_holds(const SeparationReport& report, const PointCloud& img_a, const PointCloud& img_b);

}  // namespace linkobs
