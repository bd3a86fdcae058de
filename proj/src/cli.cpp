#include <iostream>

#include <CLI11.hpp>

#include "xomine/errors.hpp"
#include "xomine/pipeline.hpp"
#include "xomine/version.hpp"

namespace xomine {

namespace {

struct HelpRequested {
  std::string text;
};

RunConfig parse_config_impl(const std::vector<std::string>& args) {
  RunConfig cfg;
  double nic_percent = 0;
  double nic_value = 0;
  double fpr = 0;
  std::size_t compare_top = 0;
  std::vector<std::string> kinds;

  CLI::App app{"Mine cross-ontology association rules from gene annotation data"};
  app.name(kToolName);
  app.set_version_flag("--version", std::string(kToolVersion));
  app.add_option("--obo", cfg.obo_paths, "OBO ontology file (repeat once per ontology; exactly two)")
      ->required();
  app.add_option("--category", cfg.categories, "Category label for each --obo file, same order")
      ->required();
  app.add_option("--annotations", cfg.annotations_path, "Annotation TSV: gene<TAB>term per line")
      ->required();
  auto* np = app.add_option("--nic-percent", nic_percent,
                            "Term filter: keep terms annotated to at most this percent of genes");
  auto* nv = app.add_option("--nic-value", nic_value, "Term filter: direct N_IC cutoff in [0,1]");
  np->excludes(nv);
  nv->excludes(np);
  app.add_option("--fpr", fpr, "Target false positive rate for the N_COMI threshold, in (0,1]")
      ->required();
  app.add_option("--min-support", cfg.min_support, "Minimum rule support over |COCategory|")
      ->capture_default_str();
  app.add_option("--alpha", cfg.alpha, "IRIC weight of the antecedent-side category (beta = 1 - alpha)")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for the synthetic-null RNG stream")->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads for the mining stage")
      ->capture_default_str();
  app.add_option("--output-dir", cfg.output_dir, "Directory for rules.tsv, manifest.json, ...")
      ->capture_default_str();
  app.add_option("--rank-key", cfg.rank_key,
                 "Ranking metric: iric, n_comi, mi, info_gain, support or confidence")
      ->capture_default_str();
  app.add_flag("--both-directions,!--no-both-directions", cfg.both_directions,
               "Emit both rule directions (default on; negated form keeps the "
               "lexicographically smaller antecedent)");
  app.add_flag("--ablation", cfg.ablation,
               "Also report rules/mean N_IC/mean N_COMI for each threshold applied alone and together");
  app.add_option("--compare-top", compare_top, "Top-K overlap report of IRIC vs information gain");
  app.add_option("--transitive-kind", kinds,
                 "Relation kinds traversed for generalization (default: is_a part_of)");
  app.add_flag("--uniform-pool", cfg.uniform_pool,
               "Sample the synthetic null from distinct terms uniformly instead of the "
               "occurrence multiset");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested{std::string(kToolVersion) + "\n"};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (np->count()) cfg.nic_percent = nic_percent;
  if (nv->count()) cfg.nic_value = nic_value;
  cfg.fpr = fpr;
  if (app.count("--compare-top")) cfg.compare_top = compare_top;
  if (!kinds.empty()) cfg.transitive_kinds = kinds;
  cfg.validate();
  return cfg;
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) { return parse_config_impl(args); }

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    RunConfig cfg = parse_config(args);
    run_pipeline(cfg, std::cout);
    return 0;
  } catch (const HelpRequested& h) {
    std::cout << h.text;
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace xomine
