#include "linkobs/flow.hpp"

#include <algorithm>
#include <cmath>

#include "linkobs/degree.hpp"

namespace linkobs {

namespace {

Eigen::ArrayXXd field(const ActivationKind& kind, const Eigen::ArrayXXd& x) { return kind.apply(x) - x; }

void check_step(double step) {
  require(step > 0.0 && step <= kMaxFlowStep, "flow step must lie in (0, 1e-2]");
}

// Fixed-step RK4 on a block of points, one column per point.
Eigen::ArrayXXd rk4(const ActivationKind& kind, Eigen::ArrayXXd x, double duration, double step) {
  require(duration >= 0.0 && std::isfinite(duration), "flow duration must be finite and nonnegative");
  check_step(step);
  if (duration == 0.0) return x;
  const auto steps = static_cast<long>(std::ceil(duration / step - 1e-9));
  const double h = duration / static_cast<double>(steps);
  for (long k = 0; k < steps; ++k) {
    const Eigen::ArrayXXd k1 = field(kind, x);
    const Eigen::ArrayXXd k2 = field(kind, x + 0.5 * h * k1);
    const Eigen::ArrayXXd k3 = field(kind, x + 0.5 * h * k2);
    const Eigen::ArrayXXd k4 = field(kind, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (!x.allFinite()) throw NumericFailure("flow state became non-finite");
  return x;
}

double homotopy_duration(double s) {
  require(s >= 0.0 && s <= 1.0, "homotopy parameter must lie in [0,1]");
  if (s >= 1.0) return kFlowTimeCap;
  return std::min(s / (1.0 - s), kFlowTimeCap);
}

}  // namespace

Vec flow_field(const ActivationKind& kind, const Vec& x) { return field(kind, x.array()).matrix(); }

void advance(const ActivationKind& kind, FlowState& state, double duration) {
  state.position = rk4(kind, state.position.array(), duration, state.step_size).matrix();
  state.time += duration;
}

Vec integrate_flow(const ActivationKind& kind, const Vec& x0, double t, double step) {
  FlowState st{x0, 0.0, step};
  advance(kind, st, t);
  return st.position;
}

Mat integrate_flow_columns(const ActivationKind& kind, const Mat& x0, double t, double step) {
  return rk4(kind, x0.array(), t, step).matrix();
}

Vec compactified_homotopy(const ActivationKind& kind, const Vec& x, double s, double step) {
  return compactified_homotopy_columns(kind, x, s, step).col(0);
}

Mat compactified_homotopy_columns(const ActivationKind& kind, const Mat& x, double s, double step) {
  const double t = homotopy_duration(s);
  if (s >= 1.0) return kind.apply(x.array()).matrix();
  return integrate_flow_columns(kind, x, t, step);
}

double check_group_law(const ActivationKind& kind, const std::vector<Vec>& xs,
                       const std::vector<std::pair<double, double>>& time_pairs, double step) {
  if (xs.empty()) return 0.0;
  Mat block(xs.front().size(), static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require(xs[i].size() == block.rows(), "group law inputs differ in dimension");
    block.col(static_cast<Eigen::Index>(i)) = xs[i];
  }
  double worst = 0.0;
  for (const auto& [t1, t2] : time_pairs) {
    require(t1 >= 0.0 && t2 >= 0.0, "group law times must be nonnegative");
    const Mat joint = integrate_flow_columns(kind, block, t1 + t2, step);
    const Mat split = integrate_flow_columns(kind, integrate_flow_columns(kind, block, t1, step), t2, step);
    worst = std::max(worst, (joint - split).colwise().norm().maxCoeff());
  }
  return worst;
}

std::vector<HomotopyTracePoint> homotopy_link_preservation(const ActivationKind& kind, const EmbeddedPair& pair,
                                                           const std::vector<double>& s_grid, double step) {
  require(has_defined_degree(pair), "homotopy trace needs a pair with a defined degree");
  std::vector<HomotopyTracePoint> trace;
  trace.reserve(s_grid.size());
  for (double s : s_grid) {
    HomotopyTracePoint pt;
    pt.s = s;
    PointCloud a = pair.side_a, b = pair.side_b;
    a.points = compactified_homotopy_columns(kind, pair.side_a.points, s, step);
    b.points = compactified_homotopy_columns(kind, pair.side_b.points, s, step);
    pt.min_gap = min_pairwise_gap(a.points, b.points);
    pt.resolution = std::max(sampling_resolution(a), sampling_resolution(b));
    if (pt.min_gap > 10.0 * pt.resolution) {
      EmbeddedPair mapped{std::move(a), std::move(b), std::nullopt, pt.min_gap};
      try {
        const DegreeReport rep = pair_degree(mapped);
        pt.degree_estimate = rep.estimate;
        pt.degree = rep.rounded;
      } catch (const NumericFailure&) {
        // leave the degree unset: unreliable at this s
      }
    }
    trace.push_back(std::move(pt));
  }
  return trace;
}

}  // namespace linkobs
