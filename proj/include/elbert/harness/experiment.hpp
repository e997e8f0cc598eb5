#ifndef ELBERT_HARNESS_EXPERIMENT_HPP_
#define ELBERT_HARNESS_EXPERIMENT_HPP_

#include <string>

#include "elbert/harness/config.hpp"
#include "nlohmann/json_fwd.hpp"

namespace elbert::harness {

// One training run: trains in <run_dir> writing metrics.csv (one row per
// evaluation point), config.json, periodic checkpoint.json files and
// final_checkpoint.json. resume_checkpoint, when given, restores a previous
// checkpoint and continues its schedule. Returns a run report.
nlohmann::json run_single_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                               const std::string& run_dir,
                               const std::string& resume_checkpoint = "");

// Runs every configured seed under cfg.output_dir/seed_<k>/ and writes
// summary.json aggregating final metrics (mean and standard error across
// seeds). A failing seed is recorded in the summary without aborting the
// rest; its partial metrics stay on disk.
nlohmann::json run_experiment(const ExperimentConfig& cfg);

}  // namespace elbert::harness

#endif  // ELBERT_HARNESS_EXPERIMENT_HPP_
