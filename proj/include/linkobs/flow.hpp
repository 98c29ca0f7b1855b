#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "linkobs/activation.hpp"
#include "linkobs/geometry.hpp"

namespace linkobs {

inline constexpr double kDefaultFlowStep = 1e-3;
inline constexpr double kMaxFlowStep = 1e-2;
/// Duration cap for the compactified homotopy; e^{-40} is below every
/// tolerance used here.
inline constexpr double kFlowTimeCap = 40.0;

/// Point on a trajectory of x' = μ(x) - x integrated with fixed-step RK4.
struct FlowState {
  Vec position;
  double time = 0.0;
  double step_size = kDefaultFlowStep;
};

/// μ(x) - x, componentwise.
Vec flow_field(const ActivationKind& kind, const Vec& x);

/// Advances `state` by `duration` using RK4 steps no larger than
/// state.step_size (the last steps are shortened uniformly so the
/// duration is hit exactly).
void advance(const ActivationKind& kind, FlowState& state, double duration);

/// φ(x0, t).
Vec integrate_flow(const ActivationKind& kind, const Vec& x0, double t, double step = kDefaultFlowStep);

/// φ(·, t) applied to every column.
Mat integrate_flow_columns(const ActivationKind& kind, const Mat& x0, double t, double step = kDefaultFlowStep);

/// H(x, s) = φ(x, s/(1-s)) for s < 1 (duration capped at kFlowTimeCap) and
/// the activation itself at s = 1.
Vec compactified_homotopy(const ActivationKind& kind, const Vec& x, double s, double step = kDefaultFlowStep);
Mat compactified_homotopy_columns(const ActivationKind& kind, const Mat& x, double s,
                                  double step = kDefaultFlowStep);

/// max over inputs and time pairs of |φ(x, t1+t2) - φ(φ(x, t1), t2)|.
double check_group_law(const ActivationKind& kind, const std::vector<Vec>& xs,
                       const std::vector<std::pair<double, double>>& time_pairs, double step = kDefaultFlowStep);

struct HomotopyTracePoint {
  double s = 0.0;
  double min_gap = 0.0;
  double resolution = 0.0;
  /// Present when the gap exceeds ten times the sampling resolution and the
  /// degree could be computed.
  std::optional<double> degree_estimate;
  std::optional<int> degree;
};

/// Pushes both sides of `pair` through H(·, s) for each s and records the
/// gap between the sides and, where reliable, the degree.
std::vector<HomotopyTracePoint> homotopy_link_preservation(const ActivationKind& kind, const EmbeddedPair& pair,
                                                           const std::vector<double>& s_grid,
                                                           double step = kDefaultFlowStep);

}  // namespace linkobs
