#ifndef ELBERT_HARNESS_METRICS_HPP_
#define ELBERT_HARNESS_METRICS_HPP_

#include <fstream>
#include <string>
#include <vector>

namespace elbert::harness {

struct MetricRecord {
  long long env_steps = 0;
  double mean_episode_reward = 0.0;
  double eval_bias = 0.0;
  std::vector<double> rates;   // NaN for groups without demand
  std::vector<double> supply;  // cumulative over the evaluation
  std::vector<double> demand;
  double wall_clock_seconds = 0.0;  // kept out of the CSV: rows stay reproducible
};

std::string metrics_csv_header(int num_groups);

// Append-only CSV writer; every row is flushed so a crash preserves all
// completed records.
class MetricsWriter {
 public:
  MetricsWriter(const std::string& path, int num_groups);
  void append(const MetricRecord& r);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  int num_groups_;
  std::ofstream out_;
};

// Parses a metrics CSV, silently dropping a truncated trailing row.
std::vector<MetricRecord> read_metrics_csv(const std::string& path);

}  // namespace elbert::harness

#endif  // ELBERT_HARNESS_METRICS_HPP_
