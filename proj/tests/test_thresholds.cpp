#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "support/oracles.hpp"
#include "xomine/errors.hpp"
#include "xomine/obo.hpp"
#include "xomine/thresholds.hpp"

using namespace xomine;

namespace {

std::shared_ptr<const OntologyGraph> graph_from(const std::string& text, const std::string& category) {
  std::istringstream in(text);
  return parse_obo(in, category).graph;
}

// catA is a chain leaf -> mid -> root; catB is flat.
TransactionSet chain_set(const std::string& tsv) {
  auto ga = graph_from(
      "[Term]\nid: root\n\n[Term]\nid: mid\nis_a: root\n\n[Term]\nid: leaf\nis_a: mid\n", "catA");
  auto gb = graph_from("[Term]\nid: y1\n\n[Term]\nid: y2\n\n[Term]\nid: y3\n", "catB");
  std::istringstream in(tsv);
  return generalize(load_annotations(in, {ga, gb}));
}

std::vector<MinedRule> rules_with_ncomi(const std::vector<double>& scores) {
  std::vector<MinedRule> rules;
  int i = 0;
  for (double s : scores) {
    MinedRule r;
    r.antecedent = "A:" + std::to_string(i++);
    r.consequent = "B:1";
    r.metrics.n_comi = s;
    rules.push_back(std::move(r));
  }
  return rules;
}

}  // namespace

TEST_CASE("nic_filter removes low-information terms and reports them") {
  // root is in every generalized catA transaction -> n_ic 0; mid in 3 of 4.
  auto ts = chain_set(
      "g1\tleaf\ng1\ty1\n"
      "g2\tmid\ng2\ty1\n"
      "g3\tmid\ng3\ty2\n"
      "g4\troot\ng4\ty3\n");
  REQUIRE(ts.size() == 4);

  auto result = nic_filter(ts, 0.5);
  std::map<std::string, double> removed;
  for (const auto& t : result.removed) removed[t.term] = t.n_ic;
  CHECK(removed.count("root"));
  CHECK(removed["root"] == 0.0);  // p = 1
  CHECK(removed.count("mid"));    // p = 0.75, n_ic ~ 0.2075
  CHECK(!removed.count("leaf"));  // p = 0.25, n_ic = 1

  for (const auto& tx : result.set.transactions())
    for (TermIndex t : tx.terms[0]) CHECK(result.set.graph(0).term_id(t) == "leaf");

  SUBCASE("emptied category slots shrink the co-category set but |G| is stable") {
    CHECK(result.set.size() == 4);
    CHECK(cocategory_ids(result.set, "catA", "catB") == std::vector<std::string>{"g1"});
  }
}

TEST_CASE("nic_filter: a p=1 term falls to any positive threshold, none at zero") {
  auto ts = chain_set("g1\tleaf\ng1\ty1\ng2\tmid\ng2\ty2\n");
  auto tiny = nic_filter(ts, 1e-9);
  bool root_removed = false;
  for (const auto& t : tiny.removed) root_removed |= t.term == "root";
  CHECK(root_removed);

  auto none = nic_filter(ts, 0.0);
  CHECK(none.removed.empty());
}

TEST_CASE("nic_filter: terms exactly at the threshold survive") {
  auto ts = chain_set("g1\tleaf\ng1\ty1\ng2\tmid\ng2\ty2\ng3\troot\ng3\ty3\ng4\troot\ng4\ty1\n");
  // mid: p = 0.5 over 4 genes -> n_ic = 0.5 exactly (log2 4 = 2)
  auto result = nic_filter(ts, 0.5);
  for (const auto& t : result.removed) CHECK(t.term != "mid");
}

TEST_CASE("percent_to_nic reference values") {
  CHECK(std::abs(percent_to_nic(5, 8176) - 0.33) <= 0.005);
  CHECK(std::abs(percent_to_nic(2, 8176) - 0.43) <= 0.005);
  CHECK(percent_to_nic(100, 8176) == 0.0);
  CHECK_THROWS_AS(percent_to_nic(0, 8176), std::invalid_argument);
  CHECK_THROWS_AS(percent_to_nic(101, 8176), std::invalid_argument);
  // percent below 100/|G| puts the probability under 1/|G|
  CHECK_THROWS_AS(percent_to_nic(5, 8), std::invalid_argument);
}

TEST_CASE("percent-to-cutoff interplay: 10%-of-genes terms fall at the 5% cutoff") {
  double cutoff = percent_to_nic(5, 8176);
  double ten_percent_term = n_ic(0.10, 8176);
  CHECK(ten_percent_term < cutoff);  // 0.26 < 0.33: removed by nic_filter
}

TEST_CASE("generate_synthetic preserves shape and is seed-deterministic") {
  auto ts = chain_set(
      "g1\tleaf\ng1\tmid\ng1\ty1\ng2\tmid\ng2\ty2\ng3\troot\ng3\ty1\ng3\ty3\ng4\troot\n");
  auto cfg = make_synthetic_config(ts, 42);
  auto synth = generate_synthetic(ts, cfg);

  REQUIRE(synth.size() == ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(synth.transactions()[i].gene == ts.transactions()[i].gene);
    for (std::size_t c = 0; c < ts.category_count(); ++c)
      CHECK(synth.transactions()[i].terms[c].size() == ts.transactions()[i].terms[c].size());
  }

  auto again = generate_synthetic(ts, cfg);
  for (std::size_t i = 0; i < synth.size(); ++i)
    CHECK(synth.transactions()[i].terms == again.transactions()[i].terms);

  auto other = generate_synthetic(ts, make_synthetic_config(ts, 43));
  bool any_difference = false;
  for (std::size_t i = 0; i < synth.size(); ++i)
    any_difference |= synth.transactions()[i].terms != other.transactions()[i].terms;
  CHECK(any_difference);
}

TEST_CASE("generate_synthetic draw frequencies approximate the pool histogram") {
  // 10,000 single-term transactions; term y1 holds 30% of catB occurrences.
  auto ga = graph_from("[Term]\nid: a\n", "catA");
  std::ostringstream obo;
  for (int i = 0; i < 8; ++i) obo << "[Term]\nid: y" << i << "\n\n";
  auto gb = graph_from(obo.str(), "catB");

  std::vector<Transaction> txs;
  for (int i = 0; i < 10000; ++i) {
    Transaction tx;
    tx.gene = "g" + std::to_string(100000 + i);
    tx.terms.resize(2);
    TermIndex term = i < 3000 ? *gb->find_term("y1") : static_cast<TermIndex>(2 + (i % 6));
    tx.terms[1].push_back(term);
    txs.push_back(std::move(tx));
  }
  TransactionSet ts({ga, gb}, std::move(txs), true);

  auto synth = generate_synthetic(ts, make_synthetic_config(ts, 7));
  std::size_t y1_draws = 0;
  TermIndex y1 = *gb->find_term("y1");
  for (const auto& tx : synth.transactions())
    for (TermIndex t : tx.terms[1]) y1_draws += t == y1;
  double share = static_cast<double>(y1_draws) / 10000.0;
  CHECK(share >= 0.25);
  CHECK(share <= 0.35);
}

TEST_CASE("generate_synthetic: uniform pool switch flattens frequencies") {
  auto ga = graph_from("[Term]\nid: a\n", "catA");
  auto gb = graph_from("[Term]\nid: common\n\n[Term]\nid: rare\n", "catB");
  std::vector<Transaction> txs;
  for (int i = 0; i < 4000; ++i) {
    Transaction tx;
    tx.gene = "g" + std::to_string(10000 + i);
    tx.terms.resize(2);
    tx.terms[1].push_back(i < 3600 ? *gb->find_term("common") : *gb->find_term("rare"));
    txs.push_back(std::move(tx));
  }
  TransactionSet ts({ga, gb}, std::move(txs), true);

  auto uniform = generate_synthetic(ts, make_synthetic_config(ts, 5, PoolKind::distinct_uniform));
  std::size_t rare_draws = 0;
  for (const auto& tx : uniform.transactions())
    for (TermIndex t : tx.terms[1]) rare_draws += t == *gb->find_term("rare");
  double share = static_cast<double>(rare_draws) / 4000.0;
  CHECK(share >= 0.45);  // ~0.5 under the uniform pool, ~0.1 under occurrences
  CHECK(share <= 0.55);
}

TEST_CASE("generate_synthetic: undersized pools trigger the retry cap") {
  // catB has one distinct term but transactions ask for two -> smaller slots.
  auto ga = graph_from("[Term]\nid: a\n", "catA");
  auto gb = graph_from("[Term]\nid: y1\n\n[Term]\nid: y2\n", "catB");
  Transaction tx;
  tx.gene = "g1";
  tx.terms.resize(2);
  tx.terms[1] = {*gb->find_term("y1"), *gb->find_term("y2")};
  TransactionSet ts({ga, gb}, {tx}, true);

  SyntheticConfig cfg;
  cfg.seed = 1;
  cfg.pools.resize(2);
  cfg.pools[1] = {*gb->find_term("y1")};  // only one distinct value available
  auto synth = generate_synthetic(ts, cfg);
  CHECK(synth.transactions()[0].terms[1].size() == 1);
}

TEST_CASE("select_ncomi_threshold: nearest-rank selection") {
  auto real = rules_with_ncomi({0.6, 0.4, 0.2});

  SUBCASE("worked example") {
    auto report = select_ncomi_threshold(real, rules_with_ncomi({0.5, 0.3, 0.1}), 0.34);
    CHECK(report.threshold == 0.5);
    CHECK(report.achieved_fpr == doctest::Approx(1.0 / 3.0));
    CHECK(report.achieved_fpr <= report.target_fpr);
    CHECK(report.null_scores == std::vector<double>{0.1, 0.3, 0.5});
    CHECK(report.real_total == 3);
    CHECK(report.real_surviving == 1);  // only 0.6
  }
  SUBCASE("target 1.0 passes everything") {
    auto report = select_ncomi_threshold(real, rules_with_ncomi({0.5, 0.3, 0.1}), 1.0);
    CHECK(report.threshold == 0.1);
    CHECK(report.achieved_fpr == 1.0);
  }
  SUBCASE("degenerate null: everything at zero") {
    auto report = select_ncomi_threshold(real, rules_with_ncomi({0.0, 0.0, 0.0}), 0.1);
    CHECK(report.threshold > 0.0);
    CHECK(report.achieved_fpr == 0.0);
    auto kept = apply_ncomi_filter(real, report.threshold);
    CHECK(kept.size() == 3);  // every real rule has n_comi > 0
  }
  SUBCASE("empty null set is an error") {
    CHECK_THROWS_AS(select_ncomi_threshold(real, {}, 0.1), DataError);
  }
  SUBCASE("target fpr domain") {
    CHECK_THROWS_AS(select_ncomi_threshold(real, rules_with_ncomi({0.1}), 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(select_ncomi_threshold(real, rules_with_ncomi({0.1}), 1.5),
                    std::invalid_argument);
  }
}

TEST_CASE("apply_ncomi_filter: inclusive boundary, sign rule, order kept") {
  auto rules = rules_with_ncomi({0.6, 0.5, 0.4, -0.1, 0.0});

  auto half = apply_ncomi_filter(rules, 0.5);
  REQUIRE(half.size() == 2);
  CHECK(half[0].metrics.n_comi == 0.6);
  CHECK(half[1].metrics.n_comi == 0.5);

  auto at_zero = apply_ncomi_filter(rules, 0.0);
  CHECK(at_zero.size() == 4);  // the -0.1 rule is gone
  for (const auto& r : at_zero) CHECK(r.metrics.n_comi >= 0.0);

  CHECK(apply_ncomi_filter(rules, 0.7).empty());
}

TEST_CASE("dual-threshold synergy on a toy fixture") {
  // Root-laden rules carry near-zero N_COMI; specific rules carry high
  // N_COMI. Each filter alone raises the surviving mean.
  auto ts = chain_set(
      "g1\tleaf\ng1\ty1\n"
      "g2\tleaf\ng2\ty1\n"
      "g3\tmid\ng3\ty2\n"
      "g4\tmid\ng4\ty2\n"
      "g5\troot\ng5\ty3\n"
      "g6\troot\ng6\ty1\n");

  MiningConfig cfg;
  cfg.category_x = "catA";
  cfg.category_y = "catB";
  cfg.min_support = 0.0;

  auto mean_nic = [](const std::vector<MinedRule>& rules) {
    if (rules.empty()) return 0.0;
    double s = 0;
    for (const auto& r : rules) s += 0.5 * (r.nic_antecedent + r.nic_consequent);
    return s / static_cast<double>(rules.size());
  };
  auto mean_ncomi = [](const std::vector<MinedRule>& rules) {
    if (rules.empty()) return 0.0;
    double s = 0;
    for (const auto& r : rules) s += r.metrics.n_comi;
    return s / static_cast<double>(rules.size());
  };

  auto before = mine(ts, cfg);
  auto filtered = nic_filter(ts, 0.4);
  auto nic_only = mine(filtered.set, cfg);
  CHECK(mean_nic(nic_only) >= mean_nic(before));

  auto report = select_ncomi_threshold(
      before, mine(generate_synthetic(ts, make_synthetic_config(ts, 9)), cfg), 0.25);
  auto ncomi_only = apply_ncomi_filter(before, report.threshold);
  CHECK(mean_ncomi(ncomi_only) >= mean_ncomi(before));

  auto report_both = select_ncomi_threshold(
      nic_only, mine(generate_synthetic(filtered.set, make_synthetic_config(filtered.set, 9)), cfg),
      0.25);
  auto both = apply_ncomi_filter(nic_only, report_both.threshold);
  CHECK(mean_ncomi(both) >= mean_ncomi(ncomi_only) - 1e-12);
  CHECK(mean_ncomi(both) >= mean_ncomi(nic_only) - 1e-12);
}

TEST_CASE("calibration soundness: held-out null survival stays near the target") {
  // A larger seeded random set so the null N_COMI distribution is dense.
  std::mt19937_64 rng(97);
  std::vector<std::string> ids_a, ids_b;
  for (int i = 0; i < 20; ++i) ids_a.push_back("A:" + std::to_string(10 + i));
  for (int i = 0; i < 20; ++i) ids_b.push_back("B:" + std::to_string(10 + i));
  OntologyGraphBuilder ba("catA"), bb("catB");
  for (const auto& id : ids_a) ba.term(id);
  for (const auto& id : ids_b) bb.term(id);
  auto ga = std::make_shared<const OntologyGraph>(ba.build());
  auto gb = std::make_shared<const OntologyGraph>(bb.build());

  std::vector<Transaction> txs;
  for (int g = 0; g < 150; ++g) {
    Transaction tx;
    tx.gene = "g" + std::to_string(1000 + g);
    tx.terms.resize(2);
    std::set<TermIndex> sa, sb;
    for (std::size_t i = 0, ka = 1 + oracle::draw(rng, 3); i < ka; ++i)
      sa.insert(static_cast<TermIndex>(oracle::draw(rng, 20)));
    for (std::size_t i = 0, kb = 1 + oracle::draw(rng, 3); i < kb; ++i)
      sb.insert(static_cast<TermIndex>(oracle::draw(rng, 20)));
    tx.terms[0].assign(sa.begin(), sa.end());
    tx.terms[1].assign(sb.begin(), sb.end());
    txs.push_back(std::move(tx));
  }
  TransactionSet ts({ga, gb}, std::move(txs), true);

  MiningConfig cfg;
  cfg.category_x = "catA";
  cfg.category_y = "catB";
  cfg.min_support = 0.0;

  auto real = mine(ts, cfg);
  auto null_a = mine(generate_synthetic(ts, make_synthetic_config(ts, 1)), cfg);
  auto report = select_ncomi_threshold(real, null_a, 0.05);

  auto null_b = mine(generate_synthetic(ts, make_synthetic_config(ts, 2)), cfg);
  std::size_t surviving = 0;
  for (const auto& r : null_b) surviving += r.metrics.n_comi >= report.threshold;
  double fraction = static_cast<double>(surviving) / static_cast<double>(null_b.size());
  CHECK(fraction <= 0.05 + 0.05);
}
