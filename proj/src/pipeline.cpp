#include "xomine/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "xomine/errors.hpp"
#include "xomine/obo.hpp"
#include "xomine/version.hpp"

namespace fs = std::filesystem;

namespace xomine {

namespace {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return std::move(buf).str();
}

void write_rules_tsv(std::ostream& out, const std::vector<MinedRule>& rules) {
  out << "antecedent_id\tantecedent_name\tconsequent_id\tconsequent_name\t"
         "n_x\tn_y\tn_xy\tn_cocat\tn_ic_x\tn_ic_y\tn_comi\tmi\tinfo_gain\t"
         "support\tconfidence\tiric\trank\n";
  for (const auto& r : rules) {
    out << r.antecedent << '\t' << r.antecedent_name << '\t' << r.consequent << '\t'
        << r.consequent_name << '\t' << r.counts.n_x << '\t' << r.counts.n_y << '\t'
        << r.counts.n_xy << '\t' << r.counts.n_cocat << '\t' << format_real(r.nic_antecedent)
        << '\t' << format_real(r.nic_consequent) << '\t' << format_real(r.metrics.n_comi) << '\t'
        << format_real(r.metrics.mi) << '\t' << format_real(r.metrics.info_gain) << '\t'
        << format_real(r.metrics.support) << '\t' << format_real(r.metrics.confidence) << '\t'
        << format_real(r.metrics.iric) << '\t' << r.rank << '\n';
  }
}

void write_removed_terms_tsv(std::ostream& out, const std::vector<RemovedTerm>& removed) {
  out << "category\tterm_id\tterm_name\tgene_count\tprobability\tn_ic\n";
  for (const auto& t : removed)
    out << t.category << '\t' << t.term << '\t' << t.name << '\t' << t.gene_count << '\t'
        << format_real(t.probability) << '\t' << format_real(t.n_ic) << '\n';
}

void write_null_scores_tsv(std::ostream& out, const std::vector<double>& scores) {
  out << "n_comi\n";
  for (double s : scores) out << format_real(s) << '\n';
}

// Write-then-rename so failed runs never leave partial outputs behind.
template <typename Fn>
std::string write_output(const fs::path& dir, const std::string& name, Fn&& body) {
  fs::path final_path = dir / name;
  fs::path tmp_path = dir / (name + ".tmp");
  {
    std::ofstream out(tmp_path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + tmp_path.string() + "'");
    body(out);
    out.flush();
    if (!out) throw IoError("error writing '" + tmp_path.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp_path, final_path, ec);
  if (ec) throw IoError("cannot move '" + tmp_path.string() + "' into place: " + ec.message());
  return final_path.string();
}

AblationCell summarize_cell(std::string name, const std::vector<MinedRule>& rules) {
  AblationCell cell;
  cell.name = std::move(name);
  cell.rules = rules.size();
  if (rules.empty()) return cell;
  double nic_sum = 0;
  double ncomi_sum = 0;
  for (const auto& r : rules) {
    nic_sum += 0.5 * (r.nic_antecedent + r.nic_consequent);
    ncomi_sum += r.metrics.n_comi;
  }
  cell.mean_nic = nic_sum / static_cast<double>(rules.size());
  cell.mean_ncomi = ncomi_sum / static_cast<double>(rules.size());
  return cell;
}

}  // namespace

void RunConfig::validate() const {
  if (obo_paths.size() != 2)
    throw UsageError("exactly two --obo files are required (run larger studies pairwise)");
  if (categories.size() != obo_paths.size())
    throw UsageError("one --category label per --obo file is required");
  if (categories[0].empty() || categories[1].empty() || categories[0] == categories[1])
    throw UsageError("--category labels must be non-empty and distinct");
  if (annotations_path.empty()) throw UsageError("--annotations is required");
  if (nic_percent.has_value() == nic_value.has_value())
    throw UsageError("exactly one of --nic-percent / --nic-value is required");
  if (nic_percent && !(*nic_percent > 0 && *nic_percent <= 100))
    throw UsageError("--nic-percent must lie in (0,100]");
  if (nic_value && !(*nic_value >= 0 && *nic_value <= 1))
    throw UsageError("--nic-value must lie in [0,1]");
  if (!fpr) throw UsageError("--fpr is required");
  if (!(*fpr > 0 && *fpr <= 1)) throw UsageError("--fpr must lie in (0,1]");
  if (!(min_support >= 0 && min_support <= 1)) throw UsageError("--min-support must lie in [0,1]");
  if (!(alpha >= 0 && alpha <= 1)) throw UsageError("--alpha must lie in [0,1]");
  if (threads < 1) throw UsageError("--threads must be >= 1");
  if (!is_rank_key(rank_key)) throw UsageError("--rank-key must be one of iric, n_comi, mi, info_gain, support, confidence");
  if (compare_top && *compare_top < 1) throw UsageError("--compare-top must be >= 1");
  if (transitive_kinds.empty()) throw UsageError("at least one --transitive-kind is required");
}

PipelineResult run_pipeline(const RunConfig& config, std::ostream& log) {
  config.validate();
  PipelineResult result;
  nlohmann::json manifest;

  // Inputs are read once; the same bytes feed the digest and the parser.
  nlohmann::json inputs = nlohmann::json::array();
  ParseOptions popt{config.transitive_kinds};
  std::vector<std::shared_ptr<const OntologyGraph>> graphs;
  for (std::size_t i = 0; i < config.obo_paths.size(); ++i) {
    std::string bytes = read_file(config.obo_paths[i]);
    inputs.push_back({{"path", config.obo_paths[i]},
                      {"category", config.categories[i]},
                      {"digest", fnv1a64_hex(bytes)}});
    std::istringstream stream(bytes);
    ParsedOntology parsed = parse_obo(stream, config.categories[i], popt);
    auto report = parsed.graph->validate();
    if (!report.valid()) {
      std::string cycle;
      for (const auto& id : report.cyclic_terms) cycle += (cycle.empty() ? "" : ", ") + id;
      throw DataError("ontology '" + config.categories[i] + "' has cyclic transitive edges: " + cycle);
    }
    log << "[parse] " << config.categories[i] << ": " << report.term_count << " terms, "
        << report.edge_count << " edges, " << parsed.warning_count << " warning(s)\n";
    for (const auto& w : parsed.warnings) log << "[parse]   " << w << '\n';
    graphs.push_back(parsed.graph);
  }

  std::string annot_bytes = read_file(config.annotations_path);
  inputs.push_back({{"path", config.annotations_path},
                    {"category", nullptr},
                    {"digest", fnv1a64_hex(annot_bytes)}});
  std::istringstream annot_stream(annot_bytes);
  TransactionSet raw = load_annotations(annot_stream, graphs);
  result.genes = raw.size();
  log << "[ingest] " << raw.size() << " gene transaction(s)\n";
  if (raw.size() < 2) throw DataError("need at least 2 genes to compute information content");

  TransactionSet gen = generalize(raw, config.transitive_kinds);
  log << "[generalize] closed annotations over kinds:";
  for (const auto& k : config.transitive_kinds) log << ' ' << k;
  log << '\n';

  double nic_cutoff = 0;
  if (config.nic_value) {
    nic_cutoff = *config.nic_value;
  } else {
    try {
      nic_cutoff = percent_to_nic(*config.nic_percent, gen.size());
    } catch (const std::invalid_argument& e) {
      throw DataError("--nic-percent " + format_real(*config.nic_percent) + " with " +
                      std::to_string(gen.size()) + " genes: " + e.what());
    }
  }
  result.nic_threshold = nic_cutoff;

  NicFilterResult filtered = nic_filter(gen, nic_cutoff);
  result.terms_removed = filtered.removed.size();
  log << "[nic-filter] cutoff " << format_real(nic_cutoff) << ": removed "
      << filtered.removed.size() << " term(s)\n";

  MiningConfig mcfg;
  mcfg.category_x = config.categories[0];
  mcfg.category_y = config.categories[1];
  mcfg.min_support = config.min_support;
  mcfg.emit_both_directions = config.both_directions;
  mcfg.nic_threshold = nic_cutoff;
  mcfg.weights = {config.alpha, 1.0 - config.alpha};

  std::vector<MinedRule> real_rules = mine(filtered.set, mcfg, config.threads);
  result.rules_mined = real_rules.size();
  std::size_t ca = filtered.set.require_category(mcfg.category_x);
  std::size_t cb = filtered.set.require_category(mcfg.category_y);
  result.cocategory = cocategory_rows(filtered.set, ca, cb).size();
  log << "[mine] " << real_rules.size() << " rule(s) over " << result.cocategory
      << " co-annotated transaction(s)\n";

  PoolKind pool_kind = config.uniform_pool ? PoolKind::distinct_uniform : PoolKind::occurrence;
  TransactionSet null_set =
      generate_synthetic(filtered.set, make_synthetic_config(filtered.set, config.seed, pool_kind));
  std::vector<MinedRule> null_rules = mine(null_set, mcfg, config.threads);
  log << "[null] " << null_rules.size() << " rule(s) from the seed-" << config.seed
      << " synthetic set\n";

  result.threshold = select_ncomi_threshold(real_rules, null_rules, *config.fpr);
  log << "[threshold] n_comi >= " << format_real(result.threshold.threshold) << " (target fpr "
      << format_real(result.threshold.target_fpr) << ", achieved "
      << format_real(result.threshold.achieved_fpr) << ")\n";

  std::vector<MinedRule> kept = apply_ncomi_filter(real_rules, result.threshold.threshold);
  result.rules = rank_rules(std::move(kept), config.rank_key);
  result.rules_final = result.rules.size();
  log << "[rank] " << result.rules.size() << " rule(s) by " << config.rank_key << '\n';

  if (config.ablation) {
    MiningConfig unpruned_cfg = mcfg;
    unpruned_cfg.nic_threshold = 0;
    std::vector<MinedRule> rules_none = mine(gen, unpruned_cfg, config.threads);
    TransactionSet null_unfiltered =
        generate_synthetic(gen, make_synthetic_config(gen, config.seed, pool_kind));
    std::vector<MinedRule> null_none = mine(null_unfiltered, unpruned_cfg, config.threads);
    ThresholdReport report_none = select_ncomi_threshold(rules_none, null_none, *config.fpr);
    std::vector<MinedRule> rules_ncomi_only = apply_ncomi_filter(rules_none, report_none.threshold);

    result.ablation.push_back(summarize_cell("before_pruning", rules_none));
    result.ablation.push_back(summarize_cell("nic_only", real_rules));
    result.ablation.push_back(summarize_cell("ncomi_only", rules_ncomi_only));
    result.ablation.push_back(summarize_cell("both", result.rules));
    for (const auto& cell : result.ablation)
      log << "[ablation] " << cell.name << ": " << cell.rules << " rule(s), mean n_ic "
          << format_real(cell.mean_nic) << ", mean n_comi " << format_real(cell.mean_ncomi) << '\n';
  }

  if (config.compare_top) {
    result.compare_top = compare_rankings(result.rules, "iric", "info_gain", *config.compare_top);
    log << "[compare-top] top-" << result.compare_top->k << " iric vs info_gain: intersection "
        << result.compare_top->intersection_size << ", jaccard "
        << format_real(result.compare_top->jaccard) << '\n';
  }

  // Manifest. Execution-resource flags (--threads) and the output directory
  // are deliberately not echoed: they must not change result bytes.
  manifest["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  manifest["config"] = {
      {"obo_paths", config.obo_paths},
      {"categories", config.categories},
      {"annotations", config.annotations_path},
      {"nic_percent", config.nic_percent ? nlohmann::json(*config.nic_percent) : nlohmann::json()},
      {"nic_value", config.nic_value ? nlohmann::json(*config.nic_value) : nlohmann::json()},
      {"fpr", *config.fpr},
      {"min_support", config.min_support},
      {"alpha", config.alpha},
      {"beta", 1.0 - config.alpha},
      {"seed", config.seed},
      {"rank_key", config.rank_key},
      {"both_directions", config.both_directions},
      {"ablation", config.ablation},
      {"compare_top", config.compare_top ? nlohmann::json(*config.compare_top) : nlohmann::json()},
      {"transitive_kinds", config.transitive_kinds},
      {"uniform_pool", config.uniform_pool},
  };
  manifest["inputs"] = inputs;
  manifest["genes"] = result.genes;
  nlohmann::json terms = nlohmann::json::array();
  for (std::size_t c = 0; c < gen.category_count(); ++c) {
    std::size_t before = term_stats(gen, c).size();
    std::size_t removed = 0;
    for (const auto& t : filtered.removed)
      if (t.category == gen.category(c)) ++removed;
    terms.push_back({{"category", gen.category(c)},
                     {"terms_before_filter", before},
                     {"terms_removed", removed},
                     {"terms_after_filter", before - removed}});
  }
  manifest["stages"] = {
      {"terms", terms},
      {"nic_threshold", result.nic_threshold},
      {"cocategory", result.cocategory},
      {"rules_mined", result.rules_mined},
      {"rules_after_ncomi", result.rules_final},
      {"rules_final", result.rules_final},
  };
  manifest["threshold"] = {
      {"target_fpr", result.threshold.target_fpr},
      {"threshold", result.threshold.threshold},
      {"achieved_fpr", result.threshold.achieved_fpr},
      {"null_rules", result.threshold.null_scores.size()},
      {"real_rules", result.threshold.real_total},
      {"real_rules_surviving", result.threshold.real_surviving},
  };
  if (!result.ablation.empty()) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& cell : result.ablation)
      cells.push_back({{"name", cell.name},
                       {"rules", cell.rules},
                       {"mean_n_ic", cell.mean_nic},
                       {"mean_n_comi", cell.mean_ncomi}});
    manifest["ablation"] = cells;
  }
  if (result.compare_top) {
    const auto& o = *result.compare_top;
    auto pairs_json = [](const std::vector<std::pair<std::string, std::string>>& v) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& [a, c] : v) arr.push_back({{"antecedent", a}, {"consequent", c}});
      return arr;
    };
    manifest["compare_top"] = {{"key_a", o.key_a},         {"key_b", o.key_b},
                               {"k", o.k},                 {"top_a", pairs_json(o.top_a)},
                               {"top_b", pairs_json(o.top_b)}, {"intersection", o.intersection_size},
                               {"jaccard", o.jaccard}};
  }

  // All computation succeeded; only now touch the output directory.
  fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

  result.rules_path =
      write_output(dir, "rules.tsv", [&](std::ostream& o) { write_rules_tsv(o, result.rules); });
  result.removed_terms_path = write_output(dir, "removed_terms.tsv", [&](std::ostream& o) {
    write_removed_terms_tsv(o, filtered.removed);
  });
  result.null_scores_path = write_output(dir, "null_scores.tsv", [&](std::ostream& o) {
    write_null_scores_tsv(o, result.threshold.null_scores);
  });
  result.manifest_path = write_output(dir, "manifest.json", [&](std::ostream& o) {
    o << manifest.dump(2) << '\n';
  });
  log << "[write] " << result.rules_path << " (" << result.rules.size() << " rules)\n";
  return result;
}

}  // namespace xomine
