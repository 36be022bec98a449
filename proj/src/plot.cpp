#include "robust_sysid/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "robust_sysid/io.hpp"

namespace robust_sysid {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 20.0;
constexpr double kTop = 24.0;
constexpr double kBottom = 56.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};

std::string f2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// p-quantile of a sorted sample by linear interpolation.
double quantile(const std::vector<double>& sorted, double p) {
  const std::size_t k = sorted.size();
  if (k == 1) return sorted[0];
  const double pos = p * static_cast<double>(k - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, k - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

struct Frame {
  double x_min, x_max, y_min, y_max;
  double x(double v) const {
    const double span = x_max > x_min ? x_max - x_min : 1.0;
    return kLeft + (v - x_min) / span * (kWidth - kLeft - kRight);
  }
  double y(double v) const {
    const double span = y_max > y_min ? y_max - y_min : 1.0;
    return kHeight - kBottom -
           (v - y_min) / span * (kHeight - kTop - kBottom);
  }
};

void open_svg(std::ostringstream& out) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n"
      << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
}

void draw_axes(std::ostringstream& out) {
  out << "<line x1=\"" << f2(kLeft) << "\" y1=\"" << f2(kHeight - kBottom)
      << "\" x2=\"" << f2(kWidth - kRight) << "\" y2=\""
      << f2(kHeight - kBottom) << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << f2(kLeft) << "\" y1=\"" << f2(kTop) << "\" x2=\""
      << f2(kLeft) << "\" y2=\"" << f2(kHeight - kBottom)
      << "\" stroke=\"black\"/>\n";
}

void x_tick(std::ostringstream& out, const Frame& frame, double v,
            const std::string& label) {
  const double px = frame.x(v);
  out << "<line x1=\"" << f2(px) << "\" y1=\"" << f2(kHeight - kBottom)
      << "\" x2=\"" << f2(px) << "\" y2=\"" << f2(kHeight - kBottom + 5)
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << f2(px) << "\" y=\"" << f2(kHeight - kBottom + 20)
      << "\" font-size=\"12\" text-anchor=\"middle\">" << label << "</text>\n";
}

void y_tick(std::ostringstream& out, const Frame& frame, double v,
            const std::string& label) {
  const double py = frame.y(v);
  out << "<line x1=\"" << f2(kLeft - 5) << "\" y1=\"" << f2(py) << "\" x2=\""
      << f2(kLeft) << "\" y2=\"" << f2(py) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << f2(kLeft - 8) << "\" y=\"" << f2(py + 4)
      << "\" font-size=\"12\" text-anchor=\"end\">" << label << "</text>\n";
}

void axis_labels(std::ostringstream& out, const std::string& x_label,
                 const std::string& y_label) {
  out << "<text x=\"" << f2((kLeft + kWidth - kRight) / 2) << "\" y=\""
      << f2(kHeight - 12) << "\" font-size=\"14\" text-anchor=\"middle\">"
      << x_label << "</text>\n"
      << "<text x=\"18\" y=\"" << f2((kTop + kHeight - kBottom) / 2)
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << f2((kTop + kHeight - kBottom) / 2) << ")\">" << y_label
      << "</text>\n";
}

}  // namespace

std::string render_error_curve_svg(const std::vector<ErrorCurveRow>& rows) {
  // method -> t -> finite errors across trials
  std::map<std::string, std::map<int, std::vector<double>>> series;
  for (const ErrorCurveRow& row : rows) {
    if (!std::isfinite(row.err_fro)) continue;
    series[row.method][row.t].push_back(
        std::max(row.err_fro, 1e-16));  // floor for the log scale
  }
  if (series.empty())
    throw IoError("no plottable rows: every error value is missing");

  int t_min = 0, t_max = 0;
  double log_min = 0.0, log_max = 0.0;
  bool first = true;
  for (auto& [method, points] : series) {
    for (auto& [t, values] : points) {
      std::sort(values.begin(), values.end());
      const double lo = std::log10(values.front());
      const double hi = std::log10(values.back());
      if (first) {
        t_min = t_max = t;
        log_min = lo;
        log_max = hi;
        first = false;
      } else {
        t_min = std::min(t_min, t);
        t_max = std::max(t_max, t);
        log_min = std::min(log_min, lo);
        log_max = std::max(log_max, hi);
      }
    }
  }
  const Frame frame{static_cast<double>(t_min), static_cast<double>(t_max),
                    std::floor(log_min), std::max(std::ceil(log_max),
                                                  std::floor(log_min) + 1.0)};

  std::ostringstream out;
  open_svg(out);
  draw_axes(out);

  const int x_step =
      std::max(1, (t_max - t_min + 5) / 6);
  for (int t = t_min; t <= t_max; t += x_step)
    x_tick(out, frame, t, std::to_string(t));
  const int dec_lo = static_cast<int>(frame.y_min);
  const int dec_hi = static_cast<int>(frame.y_max);
  const int dec_step = std::max(1, (dec_hi - dec_lo) / 10);
  for (int d = dec_lo; d <= dec_hi; d += dec_step) {
    y_tick(out, frame, d, "1e" + std::to_string(d));
  }
  axis_labels(out, "t", "estimation error");

  int color_index = 0;
  double legend_y = kTop + 16.0;
  for (const auto& [method, points] : series) {
    const char* color =
        kPalette[color_index % (sizeof kPalette / sizeof kPalette[0])];
    ++color_index;

    // interquartile band: forward along q3, back along q1
    std::ostringstream band;
    std::ostringstream median;
    std::vector<std::string> lower_back;
    bool any = false;
    for (const auto& [t, values] : points) {
      const double med = std::log10(quantile(values, 0.5));
      const double q1 = std::log10(quantile(values, 0.25));
      const double q3 = std::log10(quantile(values, 0.75));
      const std::string px = f2(frame.x(t));
      band << (any ? " " : "") << px << "," << f2(frame.y(q3));
      lower_back.push_back(px + "," + f2(frame.y(q1)));
      median << (any ? " " : "") << px << "," << f2(frame.y(med));
      any = true;
    }
    for (auto it = lower_back.rbegin(); it != lower_back.rend(); ++it)
      band << " " << *it;
    out << "<polygon points=\"" << band.str() << "\" fill=\"" << color
        << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    out << "<polyline points=\"" << median.str() << "\" fill=\"none\" stroke=\""
        << color << "\" stroke-width=\"2\"/>\n";

    out << "<line x1=\"" << f2(kWidth - kRight - 150) << "\" y1=\""
        << f2(legend_y - 4) << "\" x2=\"" << f2(kWidth - kRight - 126)
        << "\" y2=\"" << f2(legend_y - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << f2(kWidth - kRight - 120) << "\" y=\""
        << f2(legend_y) << "\" font-size=\"13\">" << method << "</text>\n";
    legend_y += 18.0;
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_certification_svg(
    const std::vector<CertificationRow>& rows) {
  std::map<int, std::pair<int, int>> counts;  // s_size -> (certified, total)
  for (const CertificationRow& row : rows) {
    auto& [good, total] = counts[row.s_size];
    if (row.certified) ++good;
    ++total;
  }
  if (counts.empty()) throw IoError("no plottable rows: empty sweep");

  const int s_min = counts.begin()->first;
  const int s_max = counts.rbegin()->first;
  const Frame frame{static_cast<double>(s_min), static_cast<double>(s_max),
                    0.0, 1.0};

  std::ostringstream out;
  open_svg(out);
  draw_axes(out);
  const int x_step = std::max(1, (s_max - s_min + 5) / 6);
  for (int s = s_min; s <= s_max; s += x_step)
    x_tick(out, frame, s, std::to_string(s));
  for (int i = 0; i <= 4; ++i) {
    const double v = i * 0.25;
    y_tick(out, frame, v, f2(v));
  }
  axis_labels(out, "|S|", "certification frequency");

  const char* color = kPalette[0];
  std::ostringstream line;
  bool any = false;
  for (const auto& [s, count] : counts) {
    const auto& [good, total] = count;
    const double freq = static_cast<double>(good) / total;
    const double bar = 1.96 * std::sqrt(freq * (1.0 - freq) / total);
    const double px = frame.x(s);
    line << (any ? " " : "") << f2(px) << "," << f2(frame.y(freq));
    any = true;
    out << "<line x1=\"" << f2(px) << "\" y1=\""
        << f2(frame.y(std::min(1.0, freq + bar))) << "\" x2=\"" << f2(px)
        << "\" y2=\"" << f2(frame.y(std::max(0.0, freq - bar)))
        << "\" stroke=\"" << color << "\"/>\n"
        << "<circle cx=\"" << f2(px) << "\" cy=\"" << f2(frame.y(freq))
        << "\" r=\"3\" fill=\"" << color << "\"/>\n";
  }
  out << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\""
      << color << "\" stroke-width=\"1.5\" stroke-dasharray=\"4 3\"/>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace robust_sysid
