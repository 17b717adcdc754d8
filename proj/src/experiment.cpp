#include "gtx/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

#include "gtx/dataset_io.hpp"
#include "gtx/encoding.hpp"
#include "gtx/grammar_text.hpp"
#include "gtx/oracle.hpp"
#include "gtx/random.hpp"
#include "gtx/synth.hpp"

namespace gtx {
namespace {

// Sub-stream tags for DeriveSeed.
enum SeedTag : std::uint64_t {
  kGrammarTag = 1,
  kDatasetTag,
  kSplitTag,
  kForestTag,
  kBackgroundTag,
  kExplainTag,
};

// ---------------------------------------------------------------------------
// Config parsing

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string Unquote(std::string_view s, std::size_t line) {
  s = Trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return std::string(s.substr(1, s.size() - 2));
  if (s.find('"') != std::string_view::npos) {
    throw ConfigError("line " + std::to_string(line) + ": unbalanced quote");
  }
  return std::string(s);
}

template <typename T>
T ParseScalar(std::string_view text, std::string_view key, std::size_t line) {
  text = Trim(text);
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    throw ConfigError("line " + std::to_string(line) + ": bad value for '" +
                      std::string(key) + "': '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string> ParseList(std::string_view text, std::size_t line) {
  text = Trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw ConfigError("line " + std::to_string(line) + ": expected a list like [a, b]");
  }
  text = text.substr(1, text.size() - 2);
  std::vector<std::string> out;
  if (Trim(text).empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    out.push_back(Unquote(text.substr(pos, comma - pos), line));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<std::size_t> ParseSizeList(std::string_view text, std::string_view key,
                                       std::size_t line) {
  std::vector<std::size_t> out;
  for (const std::string& item : ParseList(text, line)) {
    out.push_back(ParseScalar<std::size_t>(item, key, line));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Formatting

std::string FormatDouble(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6f", v);
  return buffer;
}

std::string FormatOptional(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : std::string();
}

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::optional<double> SafePearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  try {
    return Pearson(xs, ys);
  } catch (const DegenerateInputError&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Pipeline

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Stratified by label so both partitions keep both classes.
Split StratifiedSplit(const Dataset& d, double train_fraction, std::uint64_t seed) {
  std::vector<std::size_t> by_label[2];
  for (std::size_t i = 0; i < d.instances.size(); ++i) {
    by_label[d.instances[i].label == Label::kPos].push_back(i);
  }
  Rng rng(seed);
  Split split;
  for (auto& group : by_label) {
    rng.Shuffle(group.begin(), group.end());
    auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(group.size())));
    if (group.size() >= 2) n_train = std::clamp<std::size_t>(n_train, 1, group.size() - 1);
    split.train.insert(split.train.end(), group.begin(), group.begin() + n_train);
    split.test.insert(split.test.end(), group.begin() + n_train, group.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

void AddExplainerSummaries(CellResult& cell, const std::vector<const GrammarRun*>& runs,
                           const std::vector<std::string>& explainers) {
  for (const std::string& name : explainers) {
    ExplainerSummary s;
    s.explainer = name;
    std::vector<double> pooled;
    std::vector<double> grammar_means;
    for (const GrammarRun* run : runs) {
      for (const ExplainerRun& e : run->explainers) {
        if (e.explainer != name || e.accuracies.empty()) continue;
        pooled.insert(pooled.end(), e.accuracies.begin(), e.accuracies.end());
        grammar_means.push_back(Summarize(e.accuracies)->mean);
      }
    }
    s.num_scored = pooled.size();
    if (const auto p = Summarize(pooled)) {
      s.mean = p->mean;
      s.std_instance = p->std;
    }
    if (const auto g = Summarize(grammar_means)) s.std_grammar = g->std;
    cell.explainers.push_back(std::move(s));
  }
}

std::vector<CellKey> Cells(const ExperimentConfig& config) {
  std::vector<CellKey> cells;
  for (std::size_t l : config.string_lengths) {
    for (std::size_t c : config.g_complexities) {
      for (std::size_t n : config.dataset_sizes) cells.push_back({l, c, n});
    }
  }
  return cells;
}

}  // namespace

std::string_view SweepKindName(SweepKind kind) {
  return kind == SweepKind::kDatasetSize ? "dataset-size" : "g-complexity";
}

std::uint32_t ExperimentConfig::ThresholdFor(std::size_t length) const {
  if (pos_threshold != 0) return pos_threshold;
  return length <= 20 ? 6 : 8;
}

std::size_t ExperimentConfig::KFor(std::size_t length) const {
  if (k != 0) return k;
  return length <= 20 ? 6 : 8;
}

void ExperimentConfig::Validate() const {
  if (string_lengths.empty() || g_complexities.empty() || dataset_sizes.empty()) {
    throw ConfigError("string_lengths, g_complexities and dataset_sizes must be non-empty");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train_fraction must lie in (0, 1)");
  }
  if (grammars_per_cell == 0) throw ConfigError("grammars_per_cell must be positive");
  if (grammar_attempts == 0) throw ConfigError("grammar_attempts must be positive");
  for (std::size_t l : string_lengths) {
    if (l == 0) throw ConfigError("string lengths must be positive");
    if (KFor(l) > l) throw ConfigError("k exceeds string length " + std::to_string(l));
  }
  for (std::size_t n : dataset_sizes) {
    if (n < 10) throw ConfigError("dataset sizes must be at least 10");
  }
  for (const std::string& e : explainers) {
    if (e != kShapleyExplainer && e != kLimeExplainer) {
      throw ConfigError("unknown explainer '" + e + "'");
    }
  }
  StopConfig stop{dataset_sizes.front(), min_pos_ratio, max_pos_ratio, 0};
  try {
    stop.Validate();
    explain.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (forest.num_trees == 0) throw ConfigError("num_trees must be positive");
}

ExperimentConfig ParseExperimentConfig(std::string_view text) {
  ExperimentConfig c;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::map<std::string, std::size_t, std::less<>> seen;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(Trim(line.substr(0, eq)));
    const std::string_view value = Trim(line.substr(eq + 1));
    if (!seen.emplace(key, line_no).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    const std::size_t n = line_no;
    auto size = [&] { return ParseScalar<std::size_t>(value, key, n); };
    auto real = [&] { return ParseScalar<double>(value, key, n); };

    if (key == "sweep") {
      const std::string v = Unquote(value, n);
      if (v == "dataset-size") {
        c.sweep = SweepKind::kDatasetSize;
      } else if (v == "g-complexity") {
        c.sweep = SweepKind::kGComplexity;
      } else {
        throw ConfigError("line " + std::to_string(n) +
                          ": sweep must be 'dataset-size' or 'g-complexity'");
      }
    } else if (key == "string_lengths") {
      c.string_lengths = ParseSizeList(value, key, n);
    } else if (key == "g_complexities") {
      c.g_complexities = ParseSizeList(value, key, n);
    } else if (key == "dataset_sizes") {
      c.dataset_sizes = ParseSizeList(value, key, n);
    } else if (key == "num_nonterminals") {
      c.num_nonterminals = size();
    } else if (key == "num_terminal_nonterminals") {
      c.num_terminal_nonterminals = size();
    } else if (key == "num_terminal_rules") {
      c.num_terminal_rules = size();
    } else if (key == "alphabet_size") {
      c.alphabet_size = size();
    } else if (key == "terminal_rhs_length") {
      c.terminal_rhs_length = size();
    } else if (key == "pos_threshold") {
      c.pos_threshold = ParseScalar<std::uint32_t>(value, key, n);
    } else if (key == "k") {
      c.k = size();
    } else if (key == "grammars_per_cell") {
      c.grammars_per_cell = size();
    } else if (key == "train_fraction") {
      c.train_fraction = real();
    } else if (key == "min_pos_ratio") {
      c.min_pos_ratio = real();
    } else if (key == "max_pos_ratio") {
      c.max_pos_ratio = real();
    } else if (key == "seed") {
      c.seed = ParseScalar<std::uint64_t>(value, key, n);
    } else if (key == "explainers") {
      c.explainers = ParseList(value, n);
    } else if (key == "max_explained") {
      c.max_explained = size();
    } else if (key == "grammar_attempts") {
      c.grammar_attempts = size();
    } else if (key == "top_k_mode") {
      const std::string v = Unquote(value, n);
      if (v == "signed") {
        c.top_k_mode = TopKMode::kSigned;
      } else if (v == "magnitude") {
        c.top_k_mode = TopKMode::kMagnitude;
      } else {
        throw ConfigError("line " + std::to_string(n) +
                          ": top_k_mode must be 'signed' or 'magnitude'");
      }
    } else if (key == "num_trees") {
      c.forest.num_trees = size();
    } else if (key == "features_per_split") {
      c.forest.features_per_split = size();
    } else if (key == "min_leaf") {
      c.forest.min_leaf = size();
    } else if (key == "max_depth") {
      c.forest.max_depth = size();
    } else if (key == "shapley_samples") {
      c.explain.shapley_samples = size();
    } else if (key == "background_size") {
      c.explain.background_size = size();
    } else if (key == "lime_samples") {
      c.explain.lime_samples = size();
    } else if (key == "lime_flip_prob") {
      c.explain.lime_flip_prob = real();
    } else if (key == "lime_kernel_width") {
      c.explain.lime_kernel_width = real();
    } else if (key == "ridge_penalty") {
      c.explain.ridge_penalty = real();
    } else if (key == "artifact_dir") {
      c.artifact_dir = Unquote(value, n);
    } else {
      throw ConfigError("line " + std::to_string(n) + ": unknown key '" + key + "'");
    }
  }
  c.Validate();
  return c;
}

void ApplySeedOverride(ExperimentConfig& config) {
  const char* env = std::getenv("GTX_SEED");
  if (env == nullptr || *env == '\0') return;
  config.seed = ParseScalar<std::uint64_t>(env, "GTX_SEED", 0);
}

std::string CellName(const CellKey& key) {
  return "l" + std::to_string(key.string_length) + "_c" + std::to_string(key.g_complexity) +
         "_n" + std::to_string(key.dataset_size);
}

const ExplainerSummary* CellResult::Find(std::string_view explainer) const {
  for (const ExplainerSummary& s : explainers) {
    if (s.explainer == explainer) return &s;
  }
  return nullptr;
}

Evaluation EvaluateDataset(const Dataset& dataset, const ExperimentConfig& config,
                           std::uint64_t seed) {
  const EncodedDataset encoded = EncodeDataset(dataset);
  const Split split = StratifiedSplit(dataset, config.train_fraction,
                                      DeriveSeed(seed, {kSplitTag}));
  std::vector<EncodedInstance> train_x;
  std::vector<Label> train_y;
  for (std::size_t i : split.train) {
    train_x.push_back(encoded.features[i]);
    train_y.push_back(encoded.labels[i]);
  }
  Evaluation out{TrainForest(train_x, train_y, config.forest, DeriveSeed(seed, {kForestTag})),
                 {}, 0.0, 0.0, {}};
  const ForestModel& model = out.model;

  std::vector<double> train_scores;
  for (const EncodedInstance& x : train_x) train_scores.push_back(model.PredictProba(x));
  std::vector<double> test_scores;
  std::vector<Label> test_labels;
  for (std::size_t i : split.test) {
    const double p = model.PredictProba(encoded.features[i]);
    out.predictions.push_back({i, p >= 0.5 ? Label::kPos : Label::kNeg, p});
    test_scores.push_back(p);
    test_labels.push_back(encoded.labels[i]);
  }
  out.train_auc = Auc(train_scores, train_y);
  out.test_auc = Auc(test_scores, test_labels);

  std::vector<std::size_t> targets;
  for (const Prediction& p : out.predictions) {
    if (p.predicted_label == Label::kPos && encoded.labels[p.index] == Label::kPos) {
      targets.push_back(p.index);
    }
  }
  if (config.max_explained != 0 && targets.size() > config.max_explained) {
    targets.resize(config.max_explained);
  }

  const std::vector<EncodedInstance> background = SampleBackground(
      train_x, config.explain.background_size, DeriveSeed(seed, {kBackgroundTag}));
  const ScoreFunction f = model.AsScoreFunction();
  const std::string hash = DatasetHash(dataset);
  for (std::size_t e = 0; e < config.explainers.size(); ++e) {
    const std::string& name = config.explainers[e];
    AttributionFile file;
    file.dataset_sha256 = hash;
    file.explainer = name;
    file.model = "forest-" + std::to_string(config.forest.num_trees);
    for (std::size_t i : targets) {
      const std::uint64_t explain_seed = DeriveSeed(seed, {kExplainTag, e, i});
      const EncodedInstance& x = encoded.features[i];
      std::vector<double> scores =
          name == kShapleyExplainer
              ? ShapleyMonteCarlo(f, x, background, config.explain.shapley_samples,
                                  explain_seed)
              : LimeLocal(f, x, dataset.alphabet.size(), config.explain, explain_seed).scores;
      file.instances.push_back({i, Label::kPos, std::move(scores)});
    }
    out.attributions.push_back(std::move(file));
  }
  return out;
}

GrammarRun RunReplicate(const ExperimentConfig& config, const CellKey& cell,
                        std::size_t replicate) {
  GrammarRun run;
  run.cell = cell;
  run.replicate = replicate;
  const std::size_t l = cell.string_length;
  const std::uint32_t t = config.ThresholdFor(l);
  const std::size_t k = config.KFor(l);
  const StopConfig stop{cell.dataset_size, config.min_pos_ratio, config.max_pos_ratio, 0};

  // Grammar seeds ignore the dataset size so a size sweep reuses one grammar
  // per replicate.
  std::optional<EGrammar> grammar;
  Dataset dataset;
  for (std::size_t attempt = 0; attempt < config.grammar_attempts && !grammar; ++attempt) {
    run.grammar_attempts = attempt + 1;
    GrammarSpec spec;
    spec.num_nonterminals = config.num_nonterminals;
    spec.target_g_complexity = cell.g_complexity;
    spec.alphabet_size = config.alphabet_size;
    spec.terminal_rhs_length = config.terminal_rhs_length;
    spec.num_terminal_nonterminals = config.num_terminal_nonterminals;
    spec.num_terminal_rules = config.num_terminal_rules;
    spec.seed = DeriveSeed(config.seed, {kGrammarTag, l, cell.g_complexity, replicate, attempt});
    try {
      EGrammar g = SynthEGrammar(spec);
      dataset = GenerateDataset(g, l, t, stop,
                                DeriveSeed(config.seed, {kDatasetTag, l, cell.g_complexity,
                                                         cell.dataset_size, replicate, attempt}));
      grammar.emplace(std::move(g));
    } catch (const InfeasibleSpecError& e) {
      run.error = e.what();
      return run;
    } catch (const GenerationError& e) {
      run.error = e.what();
    }
  }
  if (!grammar) {
    run.error = "no usable grammar after " + std::to_string(config.grammar_attempts) +
                " attempts: " + run.error;
    return run;
  }
  run.error.clear();
  run.grammar_sha256 = GrammarHash(*grammar);
  run.dataset_sha256 = DatasetHash(dataset);
  run.dataset_size = dataset.instances.size();
  run.pos_fraction = dataset.pos_fraction();

  const VerificationReport report = VerifyDataset(dataset);
  if (!report.ok()) {
    run.error = std::to_string(report.failures.size()) + " explanations failed verification";
    return run;
  }

  const std::uint64_t run_seed =
      DeriveSeed(config.seed, {l, cell.g_complexity, cell.dataset_size, replicate});
  std::optional<Evaluation> evaluation;
  try {
    evaluation.emplace(EvaluateDataset(dataset, config, run_seed));
  } catch (const std::invalid_argument& e) {
    run.error = std::string("evaluation failed: ") + e.what();
    return run;
  }
  run.train_auc = evaluation->train_auc;
  run.test_auc = evaluation->test_auc;

  if (config.artifact_dir) {
    const auto dir = *config.artifact_dir / CellName(cell) / ("g" + std::to_string(replicate));
    SaveDataset(dataset, dir / "dataset.csv");
    WriteFile(dir / "grammar.txt", FormatGrammar(*grammar));
    WriteFile(dir / "predictions.csv", FormatPredictionsCsv(evaluation->predictions));
    for (const AttributionFile& file : evaluation->attributions) {
      WriteFile(dir / ("attributions_" + file.explainer + ".json"), FormatAttributionJson(file));
    }
  }
  for (const AttributionFile& file : evaluation->attributions) {
    const KAccuracySummary summary = ScoreAttributionFile(dataset, file, k, config.top_k_mode);
    ExplainerRun er;
    er.explainer = file.explainer;
    er.num_skipped = summary.num_skipped;
    for (const auto& [index, acc] : summary.per_instance) er.accuracies.push_back(acc);
    run.explainers.push_back(std::move(er));
  }
  run.ok = true;
  return run;
}

ExperimentResult RunExperiment(const ExperimentConfig& config,
                               const std::function<void(const GrammarRun&)>& on_run) {
  config.Validate();
  ExperimentResult result;
  result.config = config;
  for (const CellKey& key : Cells(config)) {
    std::vector<const GrammarRun*> ok_runs;
    const std::size_t first = result.runs.size();
    for (std::size_t r = 0; r < config.grammars_per_cell; ++r) {
      GrammarRun run;
      try {
        run = RunReplicate(config, key, r);
      } catch (const std::exception& e) {
        run.cell = key;
        run.replicate = r;
        run.error = e.what();
      }
      if (on_run) on_run(run);
      result.runs.push_back(std::move(run));
    }
    CellResult cell;
    cell.key = key;
    cell.pos_threshold = config.ThresholdFor(key.string_length);
    cell.k = config.KFor(key.string_length);
    std::vector<double> aucs;
    for (std::size_t i = first; i < result.runs.size(); ++i) {
      const GrammarRun& run = result.runs[i];
      if (!run.ok) {
        ++cell.grammars_failed;
        continue;
      }
      ++cell.grammars_ok;
      aucs.push_back(run.test_auc);
      ok_runs.push_back(&run);
    }
    if (const auto s = Summarize(aucs)) {
      cell.auc_mean = s->mean;
      cell.auc_std = s->std;
    }
    AddExplainerSummaries(cell, ok_runs, config.explainers);
    result.cells.push_back(std::move(cell));
  }
  return result;
}

namespace {

template <typename Metric>
std::vector<CorrelationRow> CorrelateByLength(const ExperimentResult& result,
                                              Metric&& x_of) {
  std::vector<CorrelationRow> rows;
  for (std::size_t l : result.config.string_lengths) {
    CorrelationRow row;
    row.string_length = l;
    std::vector<double> xs, ys;
    for (const CellResult& c : result.cells) {
      if (c.key.string_length != l || !c.auc_mean) continue;
      if (const auto x = x_of(c)) {
        xs.push_back(*x);
        ys.push_back(*c.auc_mean);
      }
    }
    row.classification = SafePearson(xs, ys);
    for (const std::string& name : result.config.explainers) {
      xs.clear();
      ys.clear();
      for (const CellResult& c : result.cells) {
        if (c.key.string_length != l) continue;
        const ExplainerSummary* s = c.Find(name);
        const auto x = x_of(c);
        if (s == nullptr || !s->mean || !x) continue;
        xs.push_back(*x);
        ys.push_back(*s->mean);
      }
      row.explainers.emplace_back(name, SafePearson(xs, ys));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<CorrelationRow> SweepCorrelations(const ExperimentResult& result) {
  const bool by_size = result.config.sweep == SweepKind::kDatasetSize;
  return CorrelateByLength(result, [by_size](const CellResult& c) -> std::optional<double> {
    return static_cast<double>(by_size ? c.key.dataset_size : c.key.g_complexity);
  });
}

std::vector<CorrelationRow> AucExplanationCorrelations(const ExperimentResult& result) {
  std::vector<CorrelationRow> rows;
  for (std::size_t l : result.config.string_lengths) {
    CorrelationRow row;
    row.string_length = l;
    for (const std::string& name : result.config.explainers) {
      std::vector<double> xs, ys;
      for (const CellResult& c : result.cells) {
        const ExplainerSummary* s = c.Find(name);
        if (c.key.string_length != l || !c.auc_mean || s == nullptr || !s->mean) continue;
        xs.push_back(*c.auc_mean);
        ys.push_back(*s->mean);
      }
      row.explainers.emplace_back(name, SafePearson(xs, ys));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string FormatResultsCsv(const ExperimentResult& result) {
  std::string out =
      "sweep,string_length,g_complexity,dataset_size,pos_threshold,k,grammars_ok,"
      "grammars_failed,auc_mean,auc_std";
  for (const std::string& e : result.config.explainers) {
    out += "," + e + "_kacc_mean," + e + "_kacc_std_grammar," + e + "_kacc_std_instance," +
           e + "_num_scored";
  }
  out += '\n';
  const std::string sweep(SweepKindName(result.config.sweep));
  for (const CellResult& c : result.cells) {
    out += sweep + ',' + std::to_string(c.key.string_length) + ',' +
           std::to_string(c.key.g_complexity) + ',' + std::to_string(c.key.dataset_size) +
           ',' + std::to_string(c.pos_threshold) + ',' + std::to_string(c.k) + ',' +
           std::to_string(c.grammars_ok) + ',' + std::to_string(c.grammars_failed) + ',' +
           FormatOptional(c.auc_mean) + ',' + FormatOptional(c.auc_std);
    for (const std::string& e : result.config.explainers) {
      const ExplainerSummary* s = c.Find(e);
      out += ',' + FormatOptional(s ? s->mean : std::nullopt) + ',' +
             FormatOptional(s ? s->std_grammar : std::nullopt) + ',' +
             FormatOptional(s ? s->std_instance : std::nullopt) + ',' +
             std::to_string(s ? s->num_scored : 0);
    }
    out += '\n';
  }
  return out;
}

std::string FormatRunsCsv(const ExperimentResult& result) {
  std::string out =
      "string_length,g_complexity,dataset_size,replicate,ok,grammar_attempts,"
      "grammar_sha256,dataset_sha256,pos_fraction,train_auc,test_auc";
  for (const std::string& e : result.config.explainers) {
    out += "," + e + "_kacc_mean," + e + "_num_scored";
  }
  out += ",error\n";
  for (const GrammarRun& r : result.runs) {
    out += std::to_string(r.cell.string_length) + ',' + std::to_string(r.cell.g_complexity) +
           ',' + std::to_string(r.cell.dataset_size) + ',' + std::to_string(r.replicate) +
           ',' + (r.ok ? "1" : "0") + ',' + std::to_string(r.grammar_attempts) + ',' +
           r.grammar_sha256 + ',' + r.dataset_sha256 + ',';
    if (r.ok) {
      out += FormatDouble(r.pos_fraction) + ',' + FormatDouble(r.train_auc) + ',' +
             FormatDouble(r.test_auc);
    } else {
      out += ",,";
    }
    for (const std::string& e : result.config.explainers) {
      const auto it = std::find_if(r.explainers.begin(), r.explainers.end(),
                                   [&](const ExplainerRun& x) { return x.explainer == e; });
      std::optional<double> mean;
      std::size_t scored = 0;
      if (it != r.explainers.end()) {
        scored = it->accuracies.size();
        if (const auto s = Summarize(it->accuracies)) mean = s->mean;
      }
      out += ',' + FormatOptional(mean) + ',' + std::to_string(scored);
    }
    out += ',' + CsvField(r.error) + '\n';
  }
  return out;
}

std::string FormatCorrelationsCsv(const std::vector<CorrelationRow>& rows,
                                  const std::vector<std::string>& explainers,
                                  bool has_classification) {
  std::string out = "string_length";
  if (has_classification) out += ",classification";
  for (const std::string& e : explainers) out += "," + e + "_kacc";
  out += '\n';
  for (const CorrelationRow& r : rows) {
    out += std::to_string(r.string_length);
    if (has_classification) out += ',' + FormatOptional(r.classification);
    for (const std::string& e : explainers) {
      const auto it = std::find_if(r.explainers.begin(), r.explainers.end(),
                                   [&](const auto& p) { return p.first == e; });
      out += ',' + FormatOptional(it != r.explainers.end() ? it->second : std::nullopt);
    }
    out += '\n';
  }
  return out;
}

std::string FormatPlotDataCsv(const ExperimentResult& result) {
  std::string out = "sweep,string_length,g_complexity,dataset_size,series,statistic,value\n";
  const std::string sweep(SweepKindName(result.config.sweep));
  for (const CellResult& c : result.cells) {
    const std::string prefix = sweep + ',' + std::to_string(c.key.string_length) + ',' +
                               std::to_string(c.key.g_complexity) + ',' +
                               std::to_string(c.key.dataset_size) + ',';
    auto emit = [&](const std::string& series, const char* stat,
                    const std::optional<double>& v) {
      if (v) out += prefix + series + ',' + stat + ',' + FormatDouble(*v) + '\n';
    };
    emit("auc", "mean", c.auc_mean);
    emit("auc", "std", c.auc_std);
    for (const ExplainerSummary& s : c.explainers) {
      emit(s.explainer + "_kacc", "mean", s.mean);
      emit(s.explainer + "_kacc", "std_grammar", s.std_grammar);
      emit(s.explainer + "_kacc", "std_instance", s.std_instance);
    }
  }
  return out;
}

void WriteReport(const ExperimentResult& result, const std::filesystem::path& out_dir) {
  if (result.cells.empty()) throw std::invalid_argument("no results to report");
  const auto& explainers = result.config.explainers;
  WriteFile(out_dir / "results.csv", FormatResultsCsv(result));
  WriteFile(out_dir / "runs.csv", FormatRunsCsv(result));
  WriteFile(out_dir / "correlations.csv",
            FormatCorrelationsCsv(SweepCorrelations(result), explainers));
  WriteFile(out_dir / "auc_vs_explanation.csv",
            FormatCorrelationsCsv(AucExplanationCorrelations(result), explainers, false));
  WriteFile(out_dir / "plot_data.csv", FormatPlotDataCsv(result));
}

}  // namespace gtx
