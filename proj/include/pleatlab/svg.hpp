#pragma once

#include <string>
#include <vector>

namespace pleatlab {

struct Viewport {
  double x_min = -1.0, x_max = 1.0;
  double v_min = -1.0, v_max = 1.0;
};

struct Stroke {
  std::string color = "#000000";
  double width = 1.0;
  std::string dash;  // empty for solid
};

/// Minimal SVG 1.1 writer with fixed number formatting, so equal input gives
/// byte-identical output.
class SvgCanvas {
 public:
  SvgCanvas(int width, int height, Viewport view, std::string title);

  void polyline(const std::string& id, const std::string& cls, const std::vector<std::pair<double, double>>& pts,
                const Stroke& stroke);
  void dot(const std::string& id, double x, double v, double radius, const std::string& color);
  void axis_labels(const std::string& horizontal, const std::string& vertical);

  std::string str() const;

 private:
  double px(double x) const;
  double py(double v) const;

  int width_, height_;
  Viewport view_;
  std::string title_;
  std::string body_;
  std::string labels_;
};

}  // namespace pleatlab
