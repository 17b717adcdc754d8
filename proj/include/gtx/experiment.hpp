#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gtx/attribution.hpp"
#include "gtx/explain.hpp"
#include "gtx/forest.hpp"
#include "gtx/metrics.hpp"

namespace gtx {

enum class SweepKind { kDatasetSize, kGComplexity };

std::string_view SweepKindName(SweepKind kind);

inline constexpr std::string_view kShapleyExplainer = "shapley";
inline constexpr std::string_view kLimeExplainer = "lime";

struct ExperimentConfig {
  SweepKind sweep = SweepKind::kGComplexity;
  std::vector<std::size_t> string_lengths{20};
  std::vector<std::size_t> g_complexities{20, 30, 40, 50, 60};
  std::vector<std::size_t> dataset_sizes{1000};
  std::size_t num_nonterminals = 8;
  std::size_t num_terminal_nonterminals = 0;  // 0: synthesizer default
  std::size_t num_terminal_rules = 0;         // 0: synthesizer default
  std::size_t alphabet_size = 2;
  std::size_t terminal_rhs_length = 2;
  // 0 selects the per-length preset: 6 for length 20 and below, 8 above.
  std::uint32_t pos_threshold = 0;
  std::size_t k = 0;
  std::size_t grammars_per_cell = 5;
  double train_fraction = 0.8;
  double min_pos_ratio = 0.4;
  double max_pos_ratio = 0.6;
  std::uint64_t seed = 1;
  std::vector<std::string> explainers{std::string(kShapleyExplainer),
                                      std::string(kLimeExplainer)};
  // Correctly predicted POS test instances explained per dataset; 0 means all.
  std::size_t max_explained = 40;
  // Fresh grammars tried when a dataset cannot be generated.
  std::size_t grammar_attempts = 10;
  TopKMode top_k_mode = TopKMode::kSigned;
  ForestConfig forest;
  ExplainerConfig explain;
  // When set, datasets, predictions and attribution files are written under
  // <artifact_dir>/<cell>/g<i>/.
  std::optional<std::filesystem::path> artifact_dir;

  std::uint32_t ThresholdFor(std::size_t length) const;
  std::size_t KFor(std::size_t length) const;
  // Throws std::invalid_argument when an invariant fails.
  void Validate() const;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// TOML-style `key = value` lines; lists are `[a, b, c]`, strings may be
// quoted, `#` starts a comment. Unknown keys are errors.
ExperimentConfig ParseExperimentConfig(std::string_view text);
// GTX_SEED, when set, replaces the master seed.
void ApplySeedOverride(ExperimentConfig& config);

struct CellKey {
  std::size_t string_length = 0;
  std::size_t g_complexity = 0;
  std::size_t dataset_size = 0;

  friend bool operator==(const CellKey&, const CellKey&) = default;
};

std::string CellName(const CellKey& key);

struct ExplainerRun {
  std::string explainer;
  std::vector<double> accuracies;  // one per scored instance
  std::size_t num_skipped = 0;
};

// One grammar / dataset inside a cell.
struct GrammarRun {
  CellKey cell;
  std::size_t replicate = 0;
  bool ok = false;
  std::string error;
  std::string grammar_sha256;
  std::string dataset_sha256;
  std::size_t grammar_attempts = 0;
  std::size_t dataset_size = 0;
  double pos_fraction = 0.0;
  double test_auc = 0.0;
  double train_auc = 0.0;
  std::vector<ExplainerRun> explainers;
};

struct ExplainerSummary {
  std::string explainer;
  std::optional<double> mean;          // pooled over scored instances
  std::optional<double> std_instance;  // pooled per-instance std
  std::optional<double> std_grammar;   // std of per-grammar means
  std::size_t num_scored = 0;
};

struct CellResult {
  CellKey key;
  std::uint32_t pos_threshold = 0;
  std::size_t k = 0;
  std::size_t grammars_ok = 0;
  std::size_t grammars_failed = 0;
  std::optional<double> auc_mean;
  std::optional<double> auc_std;
  std::vector<ExplainerSummary> explainers;

  const ExplainerSummary* Find(std::string_view explainer) const;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<CellResult> cells;
  std::vector<GrammarRun> runs;
};

// Runs every cell of the sweep. Per-grammar failures are recorded in `runs`
// and never abort the sweep.
ExperimentResult RunExperiment(const ExperimentConfig& config,
                               const std::function<void(const GrammarRun&)>& on_run = {});

struct Evaluation {
  ForestModel model;
  std::vector<Prediction> predictions;  // test split, ascending index
  double train_auc = 0.0;
  double test_auc = 0.0;
  // One file per configured explainer, covering the correctly predicted POS
  // test instances (capped by max_explained).
  std::vector<AttributionFile> attributions;
};

// Stratified split, forest training, test predictions and attributions for one
// dataset. Throws std::invalid_argument (e.g. SingleClassError) when the
// dataset cannot be evaluated.
Evaluation EvaluateDataset(const Dataset& dataset, const ExperimentConfig& config,
                           std::uint64_t seed);

// One grammar / dataset / model / explainer pass; exposed for tests.
GrammarRun RunReplicate(const ExperimentConfig& config, const CellKey& cell,
                        std::size_t replicate);

struct CorrelationRow {
  std::size_t string_length = 0;
  std::optional<double> classification;
  std::vector<std::pair<std::string, std::optional<double>>> explainers;
};

// Per string length: Pearson of the swept variable (complexity or dataset
// size) against the cell means.
std::vector<CorrelationRow> SweepCorrelations(const ExperimentResult& result);
// Per string length: Pearson of cell mean AUC against each explainer's mean.
std::vector<CorrelationRow> AucExplanationCorrelations(const ExperimentResult& result);

std::string FormatResultsCsv(const ExperimentResult& result);
std::string FormatRunsCsv(const ExperimentResult& result);
std::string FormatCorrelationsCsv(const std::vector<CorrelationRow>& rows,
                                  const std::vector<std::string>& explainers,
                                  bool has_classification = true);
std::string FormatPlotDataCsv(const ExperimentResult& result);

// Writes results.csv, runs.csv, correlations.csv, auc_vs_explanation.csv and
// plot_data.csv into `out_dir`.
void WriteReport(const ExperimentResult& result, const std::filesystem::path& out_dir);

}  // namespace gtx
