// Acceptance run: one PASS/FAIL line per headline criterion, followed by the
// measured values. Exit status is the number of failed criteria.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "gtx/dataset_io.hpp"
#include "gtx/experiment.hpp"
#include "gtx/explain.hpp"
#include "gtx/forest.hpp"
#include "gtx/grammar.hpp"
#include "gtx/metrics.hpp"
#include "gtx/oracle.hpp"
#include "gtx/synth.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace gtx;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void Report(const std::string& name, const std::function<Outcome()>& check) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(), seconds);
  if (!o.detail.empty()) std::printf("     %s\n", o.detail.c_str());
  std::fflush(stdout);
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fixed(double v, int digits = 3) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, v);
  return buffer;
}

Outcome GoldenLabels() {
  const EGrammar g = gtx::testing::Example2();
  const LabeledInstance pos = LabelAndExplain(g, gtx::testing::Tree11000000(g), 2);
  const LabeledInstance neg = LabelAndExplain(g, gtx::testing::Tree11000110(g), 2);
  const bool ok = pos.label == Label::kPos && pos.MaskedExplanation() == "..000000" &&
                  neg.label == Label::kNeg && neg.explanation.empty();
  return {ok, "11000000 -> " + std::string(LabelName(pos.label)) + " " +
                  pos.MaskedExplanation() + "; 11000110 -> " + std::string(LabelName(neg.label))};
}

Outcome GoldenComplexity() {
  const std::size_t c = GComplexity(gtx::testing::Example2());
  return {c == 10, "g-complexity " + std::to_string(c)};
}

Outcome GoldenExplanations() {
  const Dataset d = gtx::testing::Example1Dataset();
  const bool ok = IsCorrectExplanation("111..", d) && IsCorrectExplanation("..111", d) &&
                  IsCorrectExplanation("1..11", d) && !IsCorrectExplanation("00..1", d) &&
                  !IsCorrectExplanation("100..", d);
  return {ok, ""};
}

Outcome GeneratedDatasetsVerify() {
  const auto start = Clock::now();
  std::size_t datasets = 0;
  std::size_t failures_found = 0;
  std::size_t oracle_mismatches = 0;
  std::size_t instances = 0;
  std::string first_error;
  for (std::uint64_t i = 0; i < 100; ++i) {
    GrammarSpec spec;
    spec.target_g_complexity = 20 + 10 * (i % 5);
    spec.seed = DeriveSeed(2024, {i});
    const std::size_t length = 12 + 2 * (i % 5);
    const auto t = static_cast<std::uint32_t>(2 + i % 3);
    StopConfig stop;
    stop.target_size = 300;
    stop.min_pos_ratio = 0.0;
    stop.max_pos_ratio = 1.0;
    try {
      const EGrammar g = SynthEGrammar(spec);
      if (!CheckExplanationPreconditions(g).satisfied) {
        if (first_error.empty()) first_error = "grammar " + std::to_string(i) + " not compliant";
        continue;
      }
      const Dataset d = GenerateDataset(g, length, t, stop, DeriveSeed(spec.seed, {length, t}));
      ++datasets;
      instances += d.instances.size();
      failures_found += VerifyDataset(d).failures.size();
      for (const LabeledInstance& x : d.instances) {
        if (x.MaskedExplanation() != gtx::testing::BlockMaskOracle(x.string, g, t)) ++oracle_mismatches;
      }
    } catch (const std::exception& e) {
      if (first_error.empty()) first_error = "grammar " + std::to_string(i) + ": " + e.what();
    }
  }
  const double seconds = Seconds(start);
  std::ostringstream detail;
  detail << datasets << "/100 datasets, " << instances << " instances, " << failures_found
         << " verification failures, " << oracle_mismatches << " block-oracle mismatches, "
         << Fixed(seconds, 1) << "s (limit 300s)";
  if (!first_error.empty()) detail << "; " << first_error;
  return {datasets == 100 && failures_found == 0 && oracle_mismatches == 0 && seconds < 300,
          detail.str()};
}

ForestModel AxiomModel(Rng& rng, std::size_t l) {
  std::vector<EncodedInstance> rows;
  std::vector<Label> labels;
  for (int i = 0; i < 200; ++i) {
    rows.push_back(gtx::testing::RandomInstance(rng, l, 2));
    const auto& x = rows.back();
    labels.push_back((x[0] && x[2]) || x[5] ? Label::kPos : Label::kNeg);
  }
  ForestConfig config;
  config.num_trees = 20;
  return TrainForest(rows, labels, config, rng.Next());
}

Outcome ShapleyAxioms() {
  const auto start = Clock::now();
  Rng rng(7);
  double worst_efficiency = 0.0;
  bool dummy_ok = true;
  double worst_symmetry = 0.0;
  double worst_mae = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t l = 8;
    const ForestModel m = AxiomModel(rng, l);
    const ScoreFunction f = m.AsScoreFunction();
    std::vector<EncodedInstance> background;
    for (int b = 0; b < 30; ++b) background.push_back(gtx::testing::RandomInstance(rng, l, 2));
    const EncodedInstance x = gtx::testing::RandomInstance(rng, l, 2);

    const auto exact = ExactShapley(f, x, background);
    const double total = std::accumulate(exact.begin(), exact.end(), 0.0);
    worst_efficiency =
        std::max(worst_efficiency, std::abs(total - (f(x) - BaselineValue(f, background))));
    const auto used = m.UsedFeatures();
    for (std::size_t i = 0; i < l; ++i) dummy_ok = dummy_ok && (used[i] || exact[i] == 0.0);

    // Symmetrized model: f(z) + f(z with positions 0 and 2 swapped).
    auto swap = [](std::span<const std::uint8_t> z) {
      EncodedInstance s(z.begin(), z.end());
      std::swap(s[0], s[2]);
      return s;
    };
    const ScoreFunction sym = [&](std::span<const std::uint8_t> z) { return f(z) + f(swap(z)); };
    std::vector<EncodedInstance> closed = background;
    for (const auto& b : background) closed.push_back(swap(b));
    EncodedInstance xs = x;
    xs[2] = xs[0];
    const auto phi = ExactShapley(sym, xs, closed);
    worst_symmetry = std::max(worst_symmetry, std::abs(phi[0] - phi[2]));

    const auto mc = ShapleyMonteCarlo(f, x, background, 20000, trial);
    double mae = 0.0;
    for (std::size_t i = 0; i < l; ++i) mae += std::abs(mc[i] - exact[i]);
    worst_mae = std::max(worst_mae, mae / static_cast<double>(l));
  }
  const double seconds = Seconds(start);
  std::ostringstream detail;
  detail << "max efficiency gap " << worst_efficiency << " (< 1e-9), dummy exact zero: "
         << (dummy_ok ? "yes" : "no") << ", max symmetry gap " << worst_symmetry
         << ", max MC MAE " << Fixed(worst_mae, 4) << " (<= 0.02), " << Fixed(seconds, 1)
         << "s (limit 180s)";
  return {worst_efficiency < 1e-9 && dummy_ok && worst_symmetry < 1e-12 && worst_mae <= 0.02 &&
              seconds < 180,
          detail.str()};
}

// Mean over cells of an explainer's cell mean.
std::optional<double> MeanOverCells(const ExperimentResult& r, std::string_view explainer) {
  std::vector<double> values;
  for (const CellResult& c : r.cells) {
    if (const ExplainerSummary* s = c.Find(explainer); s && s->mean) values.push_back(*s->mean);
  }
  if (values.empty()) return std::nullopt;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

Outcome SizeSweep() {
  // Eight nonterminals, 40 rules, binary alphabet, length-2 terminal rules,
  // t = k = 8; length 30 is the first length above 20 in the 20..35 range whose
  // strings split into whole blocks and leave room for NEG strings.
  std::size_t wins = 0;
  std::ostringstream detail;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ExperimentConfig config;
    config.sweep = SweepKind::kDatasetSize;
    config.string_lengths = {30};
    config.g_complexities = {40};
    config.dataset_sizes = {1000, 2000, 3000, 4000, 5000};
    config.grammars_per_cell = 1;
    config.seed = seed;
    const ExperimentResult r = RunExperiment(config);
    const auto shap = MeanOverCells(r, kShapleyExplainer);
    const auto lime = MeanOverCells(r, kLimeExplainer);
    const bool win = shap && lime && *shap > *lime;
    wins += win;
    detail << (seed > 1 ? "; " : "") << "seed " << seed << ": "
           << (shap ? Fixed(*shap) : "n/a") << (win ? " > " : " vs ")
           << (lime ? Fixed(*lime) : "n/a");
  }
  return {wins >= 9, "Shapley ahead in " + std::to_string(wins) + "/10 seeds (need 9): " +
                         detail.str()};
}

struct ComplexitySweep {
  ExperimentResult result;
  double seconds = 0.0;
};

const ComplexitySweep& RunComplexitySweep() {
  static const ComplexitySweep sweep = [] {
    ComplexitySweep s;
    const auto start = Clock::now();
    ExperimentConfig config;  // length 20, complexities 20..60, 5 grammars per cell
    s.result = RunExperiment(config);
    s.seconds = Seconds(start);
    return s;
  }();
  return sweep;
}

Outcome ComplexityCorrelations() {
  const ComplexitySweep& s = RunComplexitySweep();
  const auto rows = SweepCorrelations(s.result);
  if (rows.size() != 1) return {false, "expected one string length"};
  const auto& row = rows[0];
  std::optional<double> shap;
  for (const auto& [name, v] : row.explainers)
    if (name == kShapleyExplainer) shap = v;
  std::ostringstream detail;
  detail << "pearson(complexity, AUC) " << (row.classification ? Fixed(*row.classification) : "n/a")
         << ", pearson(complexity, Shapley k-acc) " << (shap ? Fixed(*shap) : "n/a")
         << " (both <= -0.3), sweep " << Fixed(s.seconds, 1) << "s (limit 600s); cells:";
  for (const CellResult& c : s.result.cells) {
    const ExplainerSummary* e = c.Find(kShapleyExplainer);
    detail << " c" << c.key.g_complexity << " auc " << (c.auc_mean ? Fixed(*c.auc_mean) : "n/a")
           << " shap " << (e && e->mean ? Fixed(*e->mean) : "n/a");
  }
  const bool ok = row.classification && shap && *row.classification <= -0.3 && *shap <= -0.3 &&
                  s.seconds < 600;
  return {ok, detail.str()};
}

Outcome AucExplanationCorrelation() {
  const ComplexitySweep& s = RunComplexitySweep();
  const auto rows = AucExplanationCorrelations(s.result);
  if (rows.size() != 1) return {false, "expected one string length"};
  std::optional<double> shap;
  for (const auto& [name, v] : rows[0].explainers)
    if (name == kShapleyExplainer) shap = v;
  return {shap && *shap >= 0.2,
          "pearson(AUC, Shapley k-acc) " + (shap ? Fixed(*shap) : std::string("n/a")) +
              " across cells (>= 0.2)"};
}

int RunGtx(const std::string& args, const std::string& env) {
  const std::string command = env + " '" GTX_BINARY "' " + args + " >/dev/null 2>&1";
  const int raw = std::system(command.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

Outcome Determinism() {
  const fs::path dir = fs::temp_directory_path() / "gtx_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  WriteFile(dir / "config.toml",
            "sweep = \"g-complexity\"\nstring_lengths = [20]\ng_complexities = [20, 40]\n"
            "dataset_sizes = [1000]\ngrammars_per_cell = 2\nmax_explained = 10\n");
  const std::string base = "experiment --quiet --config '" + (dir / "config.toml").string() + "'";
  const int a = RunGtx(base + " --out '" + (dir / "a").string() + "'", "GTX_SEED=11");
  const int b = RunGtx(base + " --out '" + (dir / "b").string() + "'", "GTX_SEED=11");
  if (a != 0 || b != 0) return {false, "experiment exited with " + std::to_string(a) + "/" + std::to_string(b)};
  const std::string first = ReadFile(dir / "a" / "results.csv");
  const std::string second = ReadFile(dir / "b" / "results.csv");
  fs::remove_all(dir);
  return {first == second && !first.empty(),
          std::to_string(first.size()) + " bytes, " + (first == second ? "identical" : "different")};
}

}  // namespace

int main() {
  Report("golden: worked parse trees label as (POS, ..000000) and NEG at t = 2", GoldenLabels);
  Report("golden: worked grammar has g-complexity 10", GoldenComplexity);
  Report("golden: correct and incorrect 3-explanations on the six-string dataset",
         GoldenExplanations);
  Report("generated datasets verify: 100 synthesized grammars, lengths 12-20, t in {2,3,4}",
         GeneratedDatasetsVerify);
  Report("Shapley axioms and Monte-Carlo accuracy at 20,000 samples", ShapleyAxioms);
  Report("size sweep: Shapley k-accuracy above LIME in at least 9 of 10 seeds", SizeSweep);
  Report("complexity sweep: AUC and Shapley k-accuracy fall with g-complexity",
         ComplexityCorrelations);
  Report("complexity sweep: AUC and Shapley k-accuracy correlate positively",
         AucExplanationCorrelation);
  Report("experiment reruns with the same GTX_SEED give identical results.csv", Determinism);
  std::printf("%d criteria failed\n", failures);
  return failures;
}
