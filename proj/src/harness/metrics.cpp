#include "elbert/harness/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "elbert/errors.hpp"

namespace elbert::harness {

namespace {
std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

std::string metrics_csv_header(int num_groups) {
  std::string h = "env_steps,mean_episode_reward,eval_bias";
  for (int g = 0; g < num_groups; ++g) h += ",rate_" + std::to_string(g);
  for (int g = 0; g < num_groups; ++g) h += ",supply_" + std::to_string(g);
  for (int g = 0; g < num_groups; ++g) h += ",demand_" + std::to_string(g);
  return h;
}

MetricsWriter::MetricsWriter(const std::string& path, int num_groups)
    : path_(path), num_groups_(num_groups), out_(path, std::ios::trunc) {
  if (!out_) throw Error("cannot open metrics file '" + path + "'");
  out_ << metrics_csv_header(num_groups) << "\n";
  out_.flush();
}

void MetricsWriter::append(const MetricRecord& r) {
  if (static_cast<int>(r.rates.size()) != num_groups_ ||
      static_cast<int>(r.supply.size()) != num_groups_ ||
      static_cast<int>(r.demand.size()) != num_groups_) {
    throw ShapeError("metrics row group count mismatch");
  }
  out_ << r.env_steps << ',' << format_double(r.mean_episode_reward) << ','
       << format_double(r.eval_bias);
  for (double v : r.rates) out_ << ',' << format_double(v);
  for (double v : r.supply) out_ << ',' << format_double(v);
  for (double v : r.demand) out_ << ',' << format_double(v);
  out_ << '\n';
  out_.flush();
}

std::vector<MetricRecord> read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open metrics file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error("metrics file '" + path + "' is empty");

  int num_groups = 0;
  {
    std::stringstream hs(line);
    std::string col;
    while (std::getline(hs, col, ',')) {
      if (col.rfind("rate_", 0) == 0) ++num_groups;
    }
    if (num_groups == 0) throw Error("metrics file '" + path + "' has no rate columns");
  }

  std::vector<MetricRecord> out;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    const std::size_t expected = 3 + 3 * static_cast<std::size_t>(num_groups);
    if (cells.size() != expected) break;  // truncated trailing row
    try {
      MetricRecord r;
      r.env_steps = std::stoll(cells[0]);
      r.mean_episode_reward = std::stod(cells[1]);
      r.eval_bias = std::stod(cells[2]);
      for (int g = 0; g < num_groups; ++g) {
        r.rates.push_back(std::stod(cells[static_cast<std::size_t>(3 + g)]));
        r.supply.push_back(std::stod(cells[static_cast<std::size_t>(3 + num_groups + g)]));
        r.demand.push_back(std::stod(cells[static_cast<std::size_t>(3 + 2 * num_groups + g)]));
      }
      out.push_back(std::move(r));
    } catch (const std::exception&) {
      break;  // partially written number
    }
  }
  return out;
}

}  // namespace elbert::harness
