#include "elbert/harness/plots.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "elbert/errors.hpp"
#include "elbert/harness/metrics.hpp"
#include "nlohmann/json.hpp"

namespace elbert::harness {

namespace fs = std::filesystem;

namespace {

const char* kPalette[] = {"#d62728", "#2ca02c", "#1f77b4", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf"};

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> mean;  // x, y
  std::vector<double> stderr_y;                 // aligned with mean
};

struct PlotRect {
  double x0 = 70, y0 = 20, x1 = 620, y1 = 420;
};

class SvgCanvas {
 public:
  SvgCanvas(double width, double height) : width_(width), height_(height) {}

  void line(double x1, double y1, double x2, double y2, const std::string& color, double w = 1.0) {
    body_ << "<line x1='" << x1 << "' y1='" << y1 << "' x2='" << x2 << "' y2='" << y2
          << "' stroke='" << color << "' stroke-width='" << w << "'/>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                double w = 1.5) {
    if (pts.size() < 2) return;
    body_ << "<polyline fill='none' stroke='" << color << "' stroke-width='" << w << "' points='";
    for (const auto& [x, y] : pts) body_ << x << "," << y << " ";
    body_ << "'/>\n";
  }
  void polygon(const std::vector<std::pair<double, double>>& pts, const std::string& color,
               double opacity) {
    if (pts.size() < 3) return;
    body_ << "<polygon fill='" << color << "' fill-opacity='" << opacity << "' stroke='none' points='";
    for (const auto& [x, y] : pts) body_ << x << "," << y << " ";
    body_ << "'/>\n";
  }
  void circle(double x, double y, double r, const std::string& color) {
    body_ << "<circle cx='" << x << "' cy='" << y << "' r='" << r << "' fill='" << color << "'/>\n";
  }
  void text(double x, double y, const std::string& s, int size = 12,
            const std::string& anchor = "start") {
    body_ << "<text x='" << x << "' y='" << y << "' font-size='" << size
          << "' font-family='sans-serif' text-anchor='" << anchor << "'>" << s << "</text>\n";
  }
  void write(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write plot '" + path + "'");
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width_ << "' height='" << height_
        << "' viewBox='0 0 " << width_ << " " << height_ << "'>\n"
        << "<rect width='100%' height='100%' fill='white'/>\n"
        << body_.str() << "</svg>\n";
  }

 private:
  double width_, height_;
  std::ostringstream body_;
};

std::string format_tick(double v) {
  char buf[32];
  if (std::abs(v) >= 10000 || (std::abs(v) < 1e-3 && v != 0.0)) {
    std::snprintf(buf, sizeof(buf), "%.2g", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%.4g", v);
  }
  return buf;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  double scale(double v, double p0, double p1) const {
    if (hi == lo) return (p0 + p1) / 2.0;
    return p0 + (v - lo) / (hi - lo) * (p1 - p0);
  }
};

Axis fit_axis(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi < lo) std::swap(lo, hi);
  const double pad = (hi - lo) * 0.06 + (hi == lo ? std::max(1.0, std::abs(hi)) * 0.1 : 0.0);
  return Axis{lo - pad, hi + pad};
}

void draw_frame(SvgCanvas& svg, const PlotRect& r, const Axis& xa, const Axis& ya,
                const std::string& xlabel, const std::string& ylabel, const std::string& title) {
  svg.line(r.x0, r.y1, r.x1, r.y1, "#000000");
  svg.line(r.x0, r.y0, r.x0, r.y1, "#000000");
  for (int i = 0; i <= 5; ++i) {
    const double fx = xa.lo + (xa.hi - xa.lo) * i / 5.0;
    const double px = xa.scale(fx, r.x0, r.x1);
    svg.line(px, r.y1, px, r.y1 + 4, "#000000");
    svg.text(px, r.y1 + 18, format_tick(fx), 11, "middle");
    const double fy = ya.lo + (ya.hi - ya.lo) * i / 5.0;
    const double py = ya.scale(fy, r.y1, r.y0);
    svg.line(r.x0 - 4, py, r.x0, py, "#000000");
    svg.text(r.x0 - 8, py + 4, format_tick(fy), 11, "end");
    svg.line(r.x0, py, r.x1, py, "#e0e0e0");
  }
  svg.text((r.x0 + r.x1) / 2.0, r.y1 + 36, xlabel, 13, "middle");
  svg.text(14, (r.y0 + r.y1) / 2.0, ylabel, 13, "middle");
  svg.text((r.x0 + r.x1) / 2.0, 14, title, 14, "middle");
}

void write_curve_plot(const std::string& path, const std::vector<Series>& series,
                      const std::string& xlabel, const std::string& ylabel,
                      const std::string& title) {
  SvgCanvas svg(660, 470);
  PlotRect rect;
  double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  bool first = true;
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.mean.size(); ++i) {
      const double x = s.mean[i].first;
      const double y = s.mean[i].second;
      const double e = s.stderr_y[i];
      if (!std::isfinite(y)) continue;
      if (first) {
        xlo = xhi = x;
        ylo = y - e;
        yhi = y + e;
        first = false;
      } else {
        xlo = std::min(xlo, x);
        xhi = std::max(xhi, x);
        ylo = std::min(ylo, y - e);
        yhi = std::max(yhi, y + e);
      }
    }
  }
  const Axis xa = fit_axis(xlo, xhi);
  const Axis ya = fit_axis(ylo, yhi);
  draw_frame(svg, rect, xa, ya, xlabel, ylabel, title);

  int color_i = 0;
  double legend_y = rect.y0 + 16;
  for (const Series& s : series) {
    const std::string color = kPalette[color_i++ % 7];
    std::vector<std::pair<double, double>> top, bottom, line;
    for (std::size_t i = 0; i < s.mean.size(); ++i) {
      if (!std::isfinite(s.mean[i].second)) continue;
      const double px = xa.scale(s.mean[i].first, rect.x0, rect.x1);
      const double py = ya.scale(s.mean[i].second, rect.y1, rect.y0);
      line.emplace_back(px, py);
      top.emplace_back(px, ya.scale(s.mean[i].second + s.stderr_y[i], rect.y1, rect.y0));
      bottom.emplace_back(px, ya.scale(s.mean[i].second - s.stderr_y[i], rect.y1, rect.y0));
    }
    std::vector<std::pair<double, double>> envelope = top;
    envelope.insert(envelope.end(), bottom.rbegin(), bottom.rend());
    bool any_spread = false;
    for (std::size_t i = 0; i < s.stderr_y.size(); ++i) {
      if (s.stderr_y[i] > 0.0) any_spread = true;
    }
    if (any_spread) svg.polygon(envelope, color, 0.15);
    svg.polyline(line, color);
    svg.line(rect.x1 - 130, legend_y - 4, rect.x1 - 110, legend_y - 4, color, 2.0);
    svg.text(rect.x1 - 104, legend_y, s.label, 12);
    legend_y += 16;
  }
  svg.write(path);
}

struct RunData {
  std::string algorithm;
  std::vector<MetricRecord> records;
};

}  // namespace

void emit_plots(const std::vector<std::string>& run_dirs, const std::string& out_dir) {
  if (run_dirs.empty()) throw Error("emit_plots: no run directories given");
  std::vector<RunData> runs;
  for (const std::string& dir : run_dirs) {
    const std::string config_path = dir + "/config.json";
    const std::string metrics_path = dir + "/metrics.csv";
    if (!fs::exists(config_path) || !fs::exists(metrics_path)) {
      throw Error("run directory '" + dir + "' is missing expected files: config.json, metrics.csv");
    }
    RunData run;
    std::ifstream in(config_path);
    nlohmann::json cfg;
    in >> cfg;
    run.algorithm = cfg.at("trainer").at("algorithm").get<std::string>();
    run.records = read_metrics_csv(metrics_path);
    if (run.records.empty()) {
      std::cerr << "plots: '" << dir << "' has no metric rows, skipping\n";
      continue;
    }
    runs.push_back(std::move(run));
  }
  if (runs.empty()) throw Error("emit_plots: no usable runs");
  fs::create_directories(out_dir);

  std::map<std::string, std::vector<const RunData*>> by_algo;
  for (const RunData& r : runs) by_algo[r.algorithm].push_back(&r);

  auto build_series = [&](auto field) {
    std::vector<Series> out;
    for (const auto& [algo, group] : by_algo) {
      Series s;
      s.label = algo;
      std::set<long long> steps;
      for (const RunData* r : group) {
        for (const MetricRecord& rec : r->records) steps.insert(rec.env_steps);
      }
      for (long long step : steps) {
        std::vector<double> vals;
        for (const RunData* r : group) {
          for (const MetricRecord& rec : r->records) {
            if (rec.env_steps == step) {
              vals.push_back(field(rec));
              break;
            }
          }
        }
        if (vals.size() < group.size()) {
          std::cerr << "plots: algorithm '" << algo << "' is missing data at step " << step
                    << "; envelope has a gap\n";
        }
        if (vals.empty()) continue;
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= static_cast<double>(vals.size());
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        const double se = vals.size() > 1
                              ? std::sqrt(var / (static_cast<double>(vals.size()) - 1.0)) /
                                    std::sqrt(static_cast<double>(vals.size()))
                              : 0.0;
        s.mean.emplace_back(static_cast<double>(step), mean);
        s.stderr_y.push_back(se);
      }
      out.push_back(std::move(s));
    }
    return out;
  };

  write_curve_plot(out_dir + "/reward_vs_steps.svg",
                   build_series([](const MetricRecord& r) { return r.mean_episode_reward; }),
                   "env steps", "reward", "Mean episode reward");
  write_curve_plot(out_dir + "/bias_vs_steps.svg",
                   build_series([](const MetricRecord& r) { return r.eval_bias; }), "env steps",
                   "bias", "Evaluation bias");

  // Final reward against final bias, one marker per algorithm.
  SvgCanvas svg(660, 470);
  PlotRect rect;
  struct Marker {
    std::string algo;
    double bias, reward, bias_se, reward_se;
  };
  std::vector<Marker> markers;
  for (const auto& [algo, group] : by_algo) {
    std::vector<double> biases, rewards;
    for (const RunData* r : group) {
      biases.push_back(r->records.back().eval_bias);
      rewards.push_back(r->records.back().mean_episode_reward);
    }
    auto mean_se = [](const std::vector<double>& v) {
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      const double se = v.size() > 1 ? std::sqrt(var / (static_cast<double>(v.size()) - 1.0)) /
                                           std::sqrt(static_cast<double>(v.size()))
                                     : 0.0;
      return std::make_pair(mean, se);
    };
    const auto [bm, bse] = mean_se(biases);
    const auto [rm, rse] = mean_se(rewards);
    markers.push_back({algo, bm, rm, bse, rse});
  }
  double xlo = markers[0].bias, xhi = markers[0].bias;
  double ylo = markers[0].reward, yhi = markers[0].reward;
  for (const Marker& m : markers) {
    xlo = std::min(xlo, m.bias - m.bias_se);
    xhi = std::max(xhi, m.bias + m.bias_se);
    ylo = std::min(ylo, m.reward - m.reward_se);
    yhi = std::max(yhi, m.reward + m.reward_se);
  }
  const Axis xa = fit_axis(xlo, xhi);
  const Axis ya = fit_axis(ylo, yhi);
  draw_frame(svg, rect, xa, ya, "bias", "reward", "Final reward vs bias");
  int color_i = 0;
  for (const Marker& m : markers) {
    const std::string color = kPalette[color_i++ % 7];
    const double px = xa.scale(m.bias, rect.x0, rect.x1);
    const double py = ya.scale(m.reward, rect.y1, rect.y0);
    svg.line(xa.scale(m.bias - m.bias_se, rect.x0, rect.x1), py,
             xa.scale(m.bias + m.bias_se, rect.x0, rect.x1), py, color);
    svg.line(px, ya.scale(m.reward - m.reward_se, rect.y1, rect.y0), px,
             ya.scale(m.reward + m.reward_se, rect.y1, rect.y0), color);
    svg.circle(px, py, 4, color);
    svg.text(px + 7, py - 7, m.algo, 12);
  }
  svg.write(out_dir + "/reward_vs_bias.svg");
}

}  // namespace elbert::harness
