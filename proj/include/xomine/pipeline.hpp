#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "xomine/miner.hpp"
#include "xomine/thresholds.hpp"

namespace xomine {

struct RunConfig {
  std::vector<std::string> obo_paths;   // exactly two for a mining run
  std::vector<std::string> categories;  // one label per OBO file, same order
  std::string annotations_path;
  std::optional<double> nic_percent;  // exactly one of nic_percent / nic_value
  std::optional<double> nic_value;
  std::optional<double> fpr;  // required, in (0,1]
  double min_support = 0.001;
  double alpha = 0.5;  // beta = 1 - alpha
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string output_dir = ".";
  std::string rank_key = "iric";
  bool both_directions = true;
  bool ablation = false;
  std::optional<std::size_t> compare_top;
  std::vector<std::string> transitive_kinds = kDefaultTransitiveKinds;
  bool uniform_pool = false;  // distinct-uniform null pools instead of occurrence multisets

  void validate() const;  // throws UsageError
};

// Per-cell summary for the dual-threshold ablation (rule count, mean of the
// two term N_ICs over rules, mean N_COMI over rules; means are 0 on empty
// cells).
struct AblationCell {
  std::string name;
  std::size_t rules = 0;
  double mean_nic = 0;
  double mean_ncomi = 0;
};

struct PipelineResult {
  std::size_t genes = 0;            // |G|
  std::size_t cocategory = 0;       // |COCategory| after the N_IC filter
  double nic_threshold = 0;
  std::size_t terms_removed = 0;
  std::size_t rules_mined = 0;      // before the N_COMI filter
  std::size_t rules_final = 0;
  ThresholdReport threshold;
  std::vector<MinedRule> rules;     // ranked
  std::vector<AblationCell> ablation;  // empty unless requested
  std::optional<RankingOverlap> compare_top;
  std::string rules_path;
  std::string manifest_path;
  std::string removed_terms_path;
  std::string null_scores_path;
};

// Runs parse -> ingest -> generalize -> N_IC filter -> mine -> calibrate ->
// N_COMI filter -> rank and writes rules.tsv, manifest.json,
// removed_terms.tsv and null_scores.tsv into output_dir. Outputs are written
// only after every stage has succeeded, so a failed run leaves no partial
// files. Identical config + seed produce byte-identical outputs for any
// thread count.
PipelineResult run_pipeline(const RunConfig& config, std::ostream& log);

// Flag parsing for the xomine binary; throws UsageError on bad flags.
RunConfig parse_config(const std::vector<std::string>& args);

// Full CLI entry: parse_config + run_pipeline with errors mapped to exit
// codes (0 ok, 1 usage, 2 I/O, 3 data validation, 4 internal).
int cli_main(int argc, const char* const* argv);

}  // namespace xomine
