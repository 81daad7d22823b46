#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "projstg/bench.hpp"

namespace projstg {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
const char* kDashes[] = {"none", "7,3", "2,2", "8,3,2,3", "4,4", "1,3"};

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
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

std::string num(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", v);
  return buffer;
}

}  // namespace

std::string plot_svg(const std::vector<CurvePoint>& curves, SweepKind sweep) {
  if (curves.empty()) {
    throw std::invalid_argument("plot_svg: curve set is empty");
  }

  // Group points per method, keeping first-appearance order.
  std::vector<std::string> methods;
  for (const CurvePoint& c : curves) {
    if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) {
      methods.push_back(c.method);
    }
  }

  double x_min = curves.front().x;
  double x_max = curves.front().x;
  for (const CurvePoint& c : curves) {
    x_min = std::min(x_min, c.x);
    x_max = std::max(x_max, c.x);
  }
  if (x_max == x_min) {
    x_min -= 1.0;
    x_max += 1.0;
  }

  const double width = 720.0;
  const double height = 480.0;
  const double left = 70.0;
  const double right = width - 160.0;
  const double top = 30.0;
  const double bottom = height - 55.0;

  auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * (right - left); };
  auto py = [&](double y) { return bottom - y * (bottom - top); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  // Horizontal grid with y tick labels.
  for (int i = 0; i <= 4; ++i) {
    const double y = 0.25 * i;
    svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(y)) << "\" x2=\"" << num(right)
        << "\" y2=\"" << num(py(y)) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << num(left - 8) << "\" y=\"" << num(py(y) + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" << num(y)
        << "</text>\n";
  }

  // X ticks at the distinct grid values.
  std::vector<double> xs;
  for (const CurvePoint& c : curves) {
    if (std::find(xs.begin(), xs.end(), c.x) == xs.end()) {
      xs.push_back(c.x);
    }
  }
  std::sort(xs.begin(), xs.end());
  const std::size_t stride = xs.size() > 14 ? xs.size() / 14 + 1 : 1;
  for (std::size_t i = 0; i < xs.size(); i += stride) {
    const double x = xs[i];
    svg << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(px(x))
        << "\" y2=\"" << num(bottom + 5) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << num(px(x)) << "\" y=\"" << num(bottom + 20)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
        << format_real(x) << "</text>\n";
  }

  // Axes.
  svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left)
      << "\" y2=\"" << num(bottom) << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(right)
      << "\" y2=\"" << num(bottom) << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";

  const std::string x_label =
      sweep == SweepKind::VaryN ? "number of samples N" : "sparsity level K";
  svg << "<text x=\"" << num((left + right) / 2) << "\" y=\"" << num(height - 14)
      << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  svg << "<text x=\"18\" y=\"" << num((top + bottom) / 2)
      << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 "
      << num((top + bottom) / 2) << ")\">probability of exact support recovery</text>\n";

  for (std::size_t m = 0; m < methods.size(); ++m) {
    std::vector<const CurvePoint*> pts;
    for (const CurvePoint& c : curves) {
      if (c.method == methods[m]) {
        pts.push_back(&c);
      }
    }
    std::sort(pts.begin(), pts.end(),
              [](const CurvePoint* a, const CurvePoint* b) { return a->x < b->x; });

    const char* color = kColors[m % 6];
    const char* dash = kDashes[m % 6];

    // Confidence band: upper edge forward, lower edge backward, so the
    // polygon has exactly 2x the grid points as vertices.
    svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
    for (const CurvePoint* p : pts) {
      svg << num(px(p->x)) << "," << num(py(p->ci_high)) << " ";
    }
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
      svg << num(px((*it)->x)) << "," << num(py((*it)->ci_low)) << " ";
    }
    svg << "\"/>\n";

    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"";
    if (std::string(dash) != "none") {
      svg << " stroke-dasharray=\"" << dash << "\"";
    }
    svg << " points=\"";
    for (const CurvePoint* p : pts) {
      svg << num(px(p->x)) << "," << num(py(p->success_rate)) << " ";
    }
    svg << "\"/>\n";

    // Legend entry.
    const double ly = top + 18.0 * static_cast<double>(m);
    svg << "<line x1=\"" << num(right + 12) << "\" y1=\"" << num(ly) << "\" x2=\""
        << num(right + 44) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"";
    if (std::string(dash) != "none") {
      svg << " stroke-dasharray=\"" << dash << "\"";
    }
    svg << "/>\n";
    svg << "<text x=\"" << num(right + 50) << "\" y=\"" << num(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(methods[m])
        << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace projstg
