#pragma once

// Phase portraits of the chart field near O: a bundle of integral curves, the
// criminant and the invariant curves, in the (x, p) chart and projected to the
// (x, y) plane.

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "pleatlab/classify.hpp"
#include "pleatlab/curves.hpp"
#include "pleatlab/flow.hpp"
#include "pleatlab/integrator.hpp"
#include "pleatlab/lift.hpp"

namespace pleatlab {

struct PortraitStyle {
  int width = 640;
  int height = 640;
  double thin = 0.6;
  double bold = 2.4;
  double dashed = 1.2;
  bool bold_curves = true;
  bool dashed_loci = true;
};

struct PortraitSpec {
  /// Half-widths of the (x, p) window around O.
  double x_half = 0.25;
  double p_half = 0.5;
  int density = 2;
  std::vector<ChartPoint> seeds;  // overrides the grid when non-empty; absolute chart points
  IntegrationOptions integ{1e-8, 1e-10, 1e-3, 0.01, 1e-13, 200000};
  double max_arc = 4.0;
  double stop_radius = kStopRadius;
  PortraitStyle style;
  unsigned threads = 0;  // 0 picks the hardware concurrency

  Window window_around(const ChartPoint& o) const {
    return {o.x - x_half, o.x + x_half, o.p - p_half, o.p + p_half};
  }
  /// Half-range of the y axis of the projection pane.
  double y_half() const { return std::pow(x_half, 1.5); }
};

/// Integrates a field from `seed` in one time direction, stopping on window
/// exit, arc budget or approach to `origin` within spec.stop_radius.
Trajectory integrate(const Field& field, const ChartPoint& seed, const PortraitSpec& spec, int direction,
                     const ChartPoint& origin = {}, double y_seed = 0.0);

/// Seeds on the boundary (4 * density per side) plus an interior lattice of
/// (2 * density - 1)^2 points, without points within 5 * stop_radius of `origin`.
std::vector<ChartPoint> seed_grid(const Window& window, int density, const ChartPoint& origin = {},
                                  double stop_radius = kStopRadius);

struct PortraitElement {
  std::string id;
  std::string kind;    // trajectory | criminant | separatrix | invariant_curve | origin
  std::string style;   // thin | dashed | bold | marker
  std::string source;  // seed id or locus id
  Trajectory curve;
};

struct PortraitResult {
  std::string case_name;
  SingularClass cls;
  std::vector<PortraitElement> elements;
  std::vector<std::string> notes;
  std::string chart_svg;
  std::string plane_svg;
  nlohmann::ordered_json manifest;

  std::vector<const PortraitElement*> of_kind(const std::string& kind) const;
};

/// Name used for output files: the Table 1 case for pleated improper points,
/// otherwise the kind (with stability for folded improper points).
std::string portrait_case_name(const SingularClass& cls);

PortraitResult render(const ImplicitOde& ode, const PortraitSpec& spec);

/// Even-odd point-in-polygon test; the polygon is closed implicitly.
bool polygon_contains(const std::vector<std::pair<double, double>>& polygon, double x, double y);

/// Whether any two polylines cross outside the disc of radius `exclusion` around `center`.
bool polylines_cross(const std::vector<Trajectory>& curves, const ChartPoint& center, double exclusion);

}  // namespace pleatlab
