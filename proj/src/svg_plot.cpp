#include "ucpoint/svg_plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace ucpoint {

namespace {

std::string num(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, ptr);
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

std::string tick_label(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
  return std::string(buf, ptr);
}

// 1, 2 or 5 times a power of ten, giving roughly `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  if (frac <= 1.0) return mag;
  if (frac <= 2.0) return 2.0 * mag;
  if (frac <= 5.0) return 5.0 * mag;
  return 10.0 * mag;
}

}  // namespace

std::string render_svg(const ScatterPlot& plot) {
  const double left = 80, right = 30, top = 40, bottom = 60;
  const double pw = plot.width - left - right;
  const double ph = plot.height - top - bottom;

  auto y_ok = [&](double y) { return std::isfinite(y) && (!plot.log_y || y > 0.0); };
  auto ty = [&](double y) { return plot.log_y ? std::log10(y) : y; };

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& p : plot.points) {
    if (!std::isfinite(p.x) || !y_ok(p.y)) continue;
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, ty(p.y));
    ymax = std::max(ymax, ty(p.y));
  }
  if (!std::isfinite(xmin)) {
    xmin = 0;
    xmax = 1;
  }
  xmin = std::min(xmin, 0.0);
  if (xmax <= xmin) xmax = xmin + 1;

  constexpr int kSamples = 400;
  std::vector<std::vector<PlotPoint>> sampled(plot.curves.size());
  for (std::size_t c = 0; c < plot.curves.size(); ++c) {
    for (int i = 0; i <= kSamples; ++i) {
      const double x = xmin + (xmax - xmin) * i / kSamples;
      double y = std::numeric_limits<double>::quiet_NaN();
      try {
        y = plot.curves[c].f(x);
      } catch (...) {
      }
      sampled[c].push_back({x, y});
      if (y_ok(y)) {
        ymin = std::min(ymin, ty(y));
        ymax = std::max(ymax, ty(y));
      }
    }
  }
  if (!std::isfinite(ymin)) {
    ymin = 0;
    ymax = 1;
  }
  if (plot.log_y) {
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
  }
  if (ymax <= ymin) ymax = ymin + 1;

  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return top + ph - (ty(y) - ymin) / (ymax - ymin) * ph; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(plot.width) + "\" height=\"" +
       std::to_string(plot.height) + "\" viewBox=\"0 0 " + std::to_string(plot.width) + " " +
       std::to_string(plot.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(plot.width / 2.0) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
       escape(plot.title) + "</text>\n";

  // axes and ticks
  s += "<g class=\"axes\" stroke=\"#333\" fill=\"none\">\n";
  s += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) + "\"/>\n";
  s += "</g>\n<g class=\"ticks\" fill=\"#333\">\n";
  const double xstep = nice_step(xmax - xmin, 8);
  for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax + 1e-9 * xstep; x += xstep) {
    s += "<line x1=\"" + num(sx(x)) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(sx(x)) + "\" y2=\"" +
         num(top + ph + 5) + "\" stroke=\"#333\"/>";
    s += "<text x=\"" + num(sx(x)) + "\" y=\"" + num(top + ph + 18) + "\" text-anchor=\"middle\">" +
         tick_label(x) + "</text>\n";
  }
  if (plot.log_y) {
    for (double e = ymin; e <= ymax + 1e-9; e += 1.0) {
      const double y = std::pow(10.0, e);
      s += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(sy(y)) + "\" x2=\"" + num(left) + "\" y2=\"" +
           num(sy(y)) + "\" stroke=\"#333\"/>";
      s += "<text x=\"" + num(left - 8) + "\" y=\"" + num(sy(y) + 4) + "\" text-anchor=\"end\">" +
           tick_label(y) + "</text>\n";
    }
  } else {
    const double ystep = nice_step(ymax - ymin, 8);
    for (double y = std::ceil(ymin / ystep) * ystep; y <= ymax + 1e-9 * ystep; y += ystep) {
      s += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(sy(y)) + "\" x2=\"" + num(left) + "\" y2=\"" +
           num(sy(y)) + "\" stroke=\"#333\"/>";
      s += "<text x=\"" + num(left - 8) + "\" y=\"" + num(sy(y) + 4) + "\" text-anchor=\"end\">" +
           tick_label(y) + "</text>\n";
    }
  }
  s += "</g>\n";
  s += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(plot.height - 15.0) + "\" text-anchor=\"middle\">" +
       escape(plot.x_label) + "</text>\n";
  s += "<text transform=\"translate(18," + num(top + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
       escape(plot.y_label + (plot.log_y ? " [log]" : "")) + "</text>\n";

  for (std::size_t c = 0; c < plot.curves.size(); ++c) {
    const std::string color = plot.curves[c].color.empty() ? "#1f77b4" : plot.curves[c].color;
    std::string pts;
    auto flush = [&] {
      if (!pts.empty())
        s += "<polyline class=\"curve\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" +
             pts + "\"/>\n";
      pts.clear();
    };
    for (const auto& p : sampled[c]) {
      const bool inside = y_ok(p.y) && ty(p.y) >= ymin && ty(p.y) <= ymax;
      if (!inside) {
        flush();
        continue;
      }
      if (!pts.empty()) pts += ' ';
      pts += num(sx(p.x)) + "," + num(sy(p.y));
    }
    flush();
  }

  s += "<g class=\"points\" fill=\"#d62728\" fill-opacity=\"0.7\">\n";
  for (const auto& p : plot.points) {
    if (!std::isfinite(p.x) || !y_ok(p.y)) continue;
    s += "<circle class=\"point\" cx=\"" + num(sx(p.x)) + "\" cy=\"" + num(sy(p.y)) + "\" r=\"3\"/>\n";
  }
  s += "</g>\n";

  // legend
  double ly = top + 15;
  s += "<g class=\"legend\">\n";
  s += "<circle cx=\"" + num(left + 15) + "\" cy=\"" + num(ly - 4) + "\" r=\"3\" fill=\"#d62728\"/>";
  s += "<text x=\"" + num(left + 25) + "\" y=\"" + num(ly) + "\">actual</text>\n";
  for (const auto& curve : plot.curves) {
    ly += 16;
    const std::string color = curve.color.empty() ? "#1f77b4" : curve.color;
    s += "<line x1=\"" + num(left + 8) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(left + 22) + "\" y2=\"" +
         num(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>";
    s += "<text x=\"" + num(left + 25) + "\" y=\"" + num(ly) + "\">" + escape(curve.label) + "</text>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

}  // namespace ucpoint
