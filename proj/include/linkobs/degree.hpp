#pragma once

#include <string>
#include <utility>
#include <vector>

#include "linkobs/geometry.hpp"
#include "linkobs/separation.hpp"

namespace linkobs {

enum class DegreeMethod { GaussLinkingIntegral, WindingAngleSum, SolidAngleSimplicial };

std::string to_string(DegreeMethod m);

struct DegreeReport {
  double estimate = 0.0;
  int rounded = 0;
  double residual = 0.0;
  DegreeMethod method = DegreeMethod::GaussLinkingIntegral;
  std::size_t samples_used = 0;
};

/// Rounds an estimate into a report. Throws NumericFailure when the
/// residual reaches 0.5 or the estimate is not finite.
DegreeReport make_degree_report(double estimate, DegreeMethod method, std::size_t samples_used);

/// Regular-value probes for the Gauss map of a pair.
struct GaussMapProbe {
  const EmbeddedPair* pair = nullptr;
  std::vector<Vec> direction_samples;

  /// Deterministic pseudo-random unit directions in R^dim.
  static GaussMapProbe make(const EmbeddedPair& pair, std::size_t count, unsigned seed = 0x5eed);
};

/// (a_i - b_j)/|a_i - b_j|.
Vec gauss_map(const EmbeddedPair& pair, std::size_t i, std::size_t j);

/// Linking number of two closed polygonal curves in R^3.
DegreeReport linking_number(const EmbeddedPair& pair);

/// Exact Gauss integral of segment p1->p2 against segment p3->p4, divided
/// by 4π. Summed over all segment pairs of two closed polygons this is
/// their linking number.
double segment_pair_linking(const Eigen::Vector3d& p1, const Eigen::Vector3d& p2, const Eigen::Vector3d& p3,
                            const Eigen::Vector3d& p4);

/// Degree of x -> (x - p)/|x - p| on a sampled (possibly deformed) sphere
/// S^{n-1}, 2 <= n <= 4.
DegreeReport sphere_point_degree(const EmbeddedPair& pair);

/// Dispatches to linking_number or sphere_point_degree by shape.
DegreeReport pair_degree(const EmbeddedPair& pair);

/// True when pair_degree is defined for this pair.
bool has_defined_degree(const EmbeddedPair& pair);

struct ProjectionProbeResult {
  SeparationReport report;
  /// (t, min_{x,y} |f^t(x) - g^t(y)|) with the trailing coordinates of both
  /// sides scaled by (1 - t).
  std::vector<std::pair<double, double>> homotopy_trace;
};

/// Projects both sides onto the first `target_dim` coordinates and tests
/// separation of the images, tracing the collapsing homotopy on `t_steps`
/// uniform values of t in [0,1].
ProjectionProbeResult projection_probe(const EmbeddedPair& pair, int target_dim, int t_steps = 11,
                                       double threshold = 0.0);

}  // namespace linkobs
