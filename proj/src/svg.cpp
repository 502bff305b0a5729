#include "pleatlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string_view>

namespace pleatlab {

namespace {

constexpr double kMargin = 32.0;

std::string f3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  // Avoid "-0.000".
  if (std::string_view(buf) == "-0.000") return "0.000";
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

SvgCanvas::SvgCanvas(int width, int height, Viewport view, std::string title)
    : width_(width), height_(height), view_(view), title_(std::move(title)) {}

double SvgCanvas::px(double x) const {
  const double v = kMargin + (x - view_.x_min) / (view_.x_max - view_.x_min) * (width_ - 2 * kMargin);
  return std::clamp(v, -10.0 * width_, 11.0 * width_);
}

double SvgCanvas::py(double v) const {
  const double r = height_ - kMargin - (v - view_.v_min) / (view_.v_max - view_.v_min) * (height_ - 2 * kMargin);
  return std::clamp(r, -10.0 * height_, 11.0 * height_);
}

void SvgCanvas::polyline(const std::string& id, const std::string& cls,
                         const std::vector<std::pair<double, double>>& pts, const Stroke& stroke) {
  std::string coords;
  coords.reserve(pts.size() * 16);
  double lx = 0.0, ly = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto [x, v] = pts[i];
    if (!std::isfinite(x) || !std::isfinite(v)) continue;
    const double X = px(x), Y = py(v);
    // Sub-pixel steps are dropped, endpoints are always kept.
    if (!coords.empty() && i + 1 < pts.size() && std::hypot(X - lx, Y - ly) < 0.5) continue;
    if (!coords.empty()) coords += ' ';
    coords += f3(X);
    coords += ',';
    coords += f3(Y);
    lx = X;
    ly = Y;
  }

  if (coords.empty()) return;
  body_ += "  <polyline id=\"" + escape(id) + "\" class=\"" + escape(cls) + "\" fill=\"none\" stroke=\"" +
           stroke.color + "\" stroke-width=\"" + f3(stroke.width) + "\"";
  if (!stroke.dash.empty()) body_ += " stroke-dasharray=\"" + stroke.dash + "\"";
  body_ += " points=\"" + coords + "\"/>\n";
}

void SvgCanvas::dot(const std::string& id, double x, double v, double radius, const std::string& color) {
  body_ += "  <circle id=\"" + escape(id) + "\" cx=\"" + f3(px(x)) + "\" cy=\"" + f3(py(v)) + "\" r=\"" +
           f3(radius) + "\" fill=\"" + color + "\"/>\n";
}

void SvgCanvas::axis_labels(const std::string& horizontal, const std::string& vertical) {
  labels_ = "<text x=\"" + f3(width_ - kMargin) + "\" y=\"" + f3(height_ - 10.0) +
            "\" font-family=\"serif\" font-size=\"14\" text-anchor=\"end\">" + escape(horizontal) +
            "</text>\n<text x=\"10.000\" y=\"" + f3(kMargin - 8.0) +
            "\" font-family=\"serif\" font-size=\"14\">" + escape(vertical) + "</text>\n";
}

std::string SvgCanvas::str() const {
  const std::string W = std::to_string(width_), H = std::to_string(height_);
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + W + "\" height=\"" + H +
       "\" viewBox=\"0 0 " + W + " " + H + "\">\n";
  s += "<title>" + escape(title_) + "</title>\n";
  const std::string inner = std::to_string(static_cast<int>(kMargin));
  const std::string iw = f3(width_ - 2 * kMargin), ih = f3(height_ - 2 * kMargin);
  s += "<defs><clipPath id=\"frame\"><rect x=\"" + inner + "\" y=\"" + inner + "\" width=\"" + iw +
       "\" height=\"" + ih + "\"/></clipPath></defs>\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + W + "\" height=\"" + H + "\" fill=\"#ffffff\"/>\n";
  s += "<rect x=\"" + inner + "\" y=\"" + inner + "\" width=\"" + iw + "\" height=\"" + ih +
       "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"0.500\"/>\n";
  s += "<g clip-path=\"url(#frame)\">\n" + body_ + "</g>\n";
  s += labels_;
  s += "</svg>\n";
  return s;
}

}  // namespace pleatlab
