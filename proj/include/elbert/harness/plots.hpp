#ifndef ELBERT_HARNESS_PLOTS_HPP_
#define ELBERT_HARNESS_PLOTS_HPP_

#include <string>
#include <vector>

namespace elbert::harness {

// Reads run directories (config.json + metrics.csv each), groups them by
// algorithm, and writes three SVG files into out_dir:
//   reward_vs_steps.svg  mean episode reward over env steps (stderr envelope)
//   bias_vs_steps.svg    evaluation bias over env steps (stderr envelope)
//   reward_vs_bias.svg   final reward against final bias, one marker per
//                        algorithm
// Missing evaluation points leave a gap and a warning on stderr; a run
// directory without its expected files raises an error naming them.
void emit_plots(const std::vector<std::string>& run_dirs, const std::string& out_dir);

}  // namespace elbert::harness

#endif  // ELBERT_HARNESS_PLOTS_HPP_
