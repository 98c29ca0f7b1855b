#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "linkobs/geometry.hpp"
#include "linkobs/net.hpp"
#include "linkobs/separation.hpp"

namespace linkobs {

/// Lower bound on sup |Net - f| for the target f(0) = 0, f = 2δ on the
/// unit sphere, from one evaluation pass.
struct ApproxGapReport {
  double delta = 0.0;
  double sup_error_lower_bound = 0.0;
  Vec argmax_point;
  double net_at_origin = 0.0;
  std::pair<double, double> net_range_on_sphere{0.0, 0.0};
};

/// Separation of Net(A) and Net(B).
SeparationReport classify_check(const MLP& net, const EmbeddedPair& pair, double threshold = 0.0);

/// Separation of L(A) and L(B) for an m x n matrix with m < n.
SeparationReport linear_map_check(const EmbeddedPair& pair, const Mat& linear, double threshold = 0.0);

/// Separation under F = post ∘ L ∘ pre.
SeparationReport conjugate_map_check(const EmbeddedPair& pair, const Mat& linear, const Homeomorphism& pre,
                                     const Homeomorphism& post, double threshold = 0.0);

/// max(|Net(0)|, max over sphere points of |Net(x) - 2δ|). The sphere
/// points are the samples plus the results of a local search on the sphere
/// started from the `polish_starts` worst samples and from the sampled
/// argmin/argmax of Net. 0 disables the search.
ApproxGapReport approximation_gap(const MLP& net, int dim, double delta, std::size_t sphere_samples = 1000,
                                  int polish_starts = 4);

/// Training data for the approximation target: sphere samples with target
/// 2δ followed by the origin with target 0, weighted so the origin counts
/// as much as the sphere.
TrainingData approximation_data(int dim, double delta, std::size_t sphere_samples = 1000);

// Random map families used by the experiments. All draw from `rng` only.

/// Gaussian m x n matrix.
Mat random_linear_map(int m, int n, std::mt19937_64& rng);

/// Gaussian m x n matrix of full rank m.
Mat random_full_rank_map(int m, int n, std::mt19937_64& rng);

/// Componentwise smooth strictly increasing map of R^dim mixing sine
/// shifts, cubic stretches and arcsinh compressions.
Homeomorphism random_monotone_homeomorphism(int dim, std::mt19937_64& rng);

}  // namespace linkobs
