#include "pxdg/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pxdg/csv.hpp"

namespace pxdg {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo, hi;
  bool log;
  double map(double v) const {
    const double t = log ? std::log10(v) : v;
    return (t - lo) / (hi - lo);
  }
};

Axis make_axis(const std::vector<PlotSeries>& series, bool use_x, bool log) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : series) {
    for (double v : use_x ? s.x : s.y) {
      if (!std::isfinite(v) || (log && v <= 0.0)) continue;
      const double t = log ? std::log10(v) : v;
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  }
  if (!(lo <= hi)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-300 * std::max(1.0, std::abs(hi))) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.03 * (hi - lo);
  return {lo - pad, hi + pad, log};
}

std::string tick_label(const Axis& axis, double t) {
  std::ostringstream os;
  os.precision(4);
  os << (axis.log ? std::pow(10.0, t) : t);
  return os.str();
}

}  // namespace

std::string line_chart(const std::vector<PlotSeries>& series, const PlotOptions& opt) {
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("series x and y differ in length");
  }
  const Axis ax = make_axis(series, true, opt.log_x);
  const Axis ay = make_axis(series, false, opt.log_y);
  const double left = 80, right = 160, top = 40, bottom = 60;
  const double pw = opt.width - left - right, ph = opt.height - top - bottom;
  auto px = [&](double v) { return left + pw * ax.map(v); };
  auto py = [&](double v) { return top + ph * (1.0 - ay.map(v)); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << opt.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << escape(opt.title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double tx = ax.lo + (ax.hi - ax.lo) * i / 4.0, ty = ay.lo + (ay.hi - ay.lo) * i / 4.0;
    const double gx = left + pw * i / 4.0, gy = top + ph * (1.0 - i / 4.0);
    os << "<line x1=\"" << gx << "\" y1=\"" << top + ph << "\" x2=\"" << gx << "\" y2=\"" << top + ph + 5
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << gx << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << tick_label(ax, tx)
       << "</text>\n";
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << gy << "\" x2=\"" << left << "\" y2=\"" << gy
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << gy + 4 << "\" text-anchor=\"end\">" << tick_label(ay, ty)
       << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << opt.height - 15 << "\" text-anchor=\"middle\">"
     << escape(opt.x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << top + ph / 2 << ")\">" << escape(opt.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    os << "<g>\n<desc>" << escape(s.label) << ":";
    for (std::size_t i = 0; i < s.x.size(); ++i) os << ' ' << format_double(s.x[i]) << ',' << format_double(s.y[i]);
    os << "</desc>\n<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
       << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if ((opt.log_x && s.x[i] <= 0) || (opt.log_y && s.y[i] <= 0)) continue;
      os << (first ? "" : " ") << px(s.x[i]) << ',' << py(s.y[i]);
      first = false;
    }
    os << "\"/>\n";
    const double ly = top + 14 + 18.0 * k;
    os << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 34 << "\" y2=\"" << ly
       << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "")
       << "/>\n<text x=\"" << left + pw + 40 << "\" y=\"" << ly + 4 << "\">" << escape(s.label) << "</text>\n</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace pxdg
