#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace pleatlab {

/// A point of the (x, p) chart. Planar normal-form fields reuse it for (xi, eta).
struct ChartPoint {
  double x = 0.0;
  double p = 0.0;
  friend bool operator==(const ChartPoint&, const ChartPoint&) = default;
};

inline double norm(const ChartPoint& a) { return std::hypot(a.x, a.p); }
inline double distance(const ChartPoint& a, const ChartPoint& b) {
  return std::hypot(a.x - b.x, a.p - b.p);
}

enum class StopReason {
  None,
  WindowExit,
  ArcBudget,
  ReachedOrigin,
  StepBudget,
  RangeEnd,
  ChartBreakdown,
  StepUnderflow,
};

const char* to_string(StopReason r);

struct TrajectorySample {
  double t = 0.0;
  double x = 0.0;
  double p = 0.0;
  double y = 0.0;  // NaN for planar fields without a surface
};

/// Sampled integral curve on the (x, p) chart together with the recovered y.
struct Trajectory {
  struct Meta {
    ChartPoint seed;
    int direction = 1;  // +1 forward in t, -1 backward
    StopReason stop = StopReason::None;
    std::string label;
  };

  std::vector<TrajectorySample> samples;
  Meta meta;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
  ChartPoint chart(std::size_t i) const { return {samples[i].x, samples[i].p}; }
};

struct PlanePoint {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
  /// dx changes sign between the previous sample and this one (cusp candidate).
  bool x_reversal = false;
};

/// pi-projection of a trajectory to the (x, y) plane.
struct PlaneCurve {
  std::vector<PlanePoint> points;
  std::string label;
};

}  // namespace pleatlab
