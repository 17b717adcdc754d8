// gtx: grammar-based benchmark generation and explainer scoring.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gtx/attribution.hpp"
#include "gtx/dataset_io.hpp"
#include "gtx/experiment.hpp"
#include "gtx/grammar_text.hpp"
#include "gtx/oracle.hpp"
#include "gtx/parse_count.hpp"
#include "gtx/synth.hpp"
#include "json.hpp"

namespace {

using nlohmann::ordered_json;

void Emit(const ordered_json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    gtx::WriteFile(path, text);
  }
}

std::uint64_t SeedFromEnv(std::uint64_t fallback) {
  gtx::ExperimentConfig c;
  c.seed = fallback;
  gtx::ApplySeedOverride(c);
  return c.seed;
}

int CheckGrammar(const std::string& path) {
  const gtx::EGrammar g = gtx::ParseGrammarText(gtx::ReadFile(path));
  const auto violations = gtx::ValidateEGrammar(g);
  const auto pre = gtx::CheckExplanationPreconditions(g);
  ordered_json j;
  j["grammar_sha256"] = gtx::GrammarHash(g);
  j["nonterminals"] = g.num_nonterminals();
  j["alphabet"] = g.alphabet();
  j["e_grammar"] = violations.empty();
  j["violations"] = ordered_json::array();
  for (const auto& v : violations) j["violations"].push_back(v.message);
  if (violations.empty()) j["g_complexity"] = gtx::GComplexity(g);
  j["explanation_preconditions"] = pre.satisfied;
  j["precondition_issues"] = pre.issues;
  Emit(j, "");
  return violations.empty() ? 0 : 1;
}

int CountParses(const std::string& grammar_path, const std::string& s, std::size_t bound) {
  const gtx::EGrammar g = gtx::ParseGrammarText(gtx::ReadFile(grammar_path));
  std::cout << gtx::CountParseTrees(s, g, bound).ToString() << "\n";
  return 0;
}

int GenGrammar(gtx::GrammarSpec spec, const std::string& out) {
  spec.seed = SeedFromEnv(spec.seed);
  const std::string text = gtx::FormatGrammar(gtx::SynthEGrammar(spec));
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    gtx::WriteFile(out, text);
  }
  return 0;
}

int GenDataset(const std::string& grammar_path, std::size_t length, std::uint32_t threshold,
               const gtx::StopConfig& stop, std::uint64_t seed, bool allow_noncompliant,
               const std::string& out) {
  const gtx::EGrammar g = gtx::ParseGrammarText(gtx::ReadFile(grammar_path));
  gtx::GenerateOptions options;
  options.allow_noncompliant_grammar = allow_noncompliant;
  const gtx::Dataset d =
      gtx::GenerateDataset(g, length, threshold, stop, SeedFromEnv(seed), options);
  gtx::SaveDataset(d, out);
  std::cerr << "wrote " << d.instances.size() << " strings (" << d.num_pos() << " POS) to "
            << out << "\n";
  return 0;
}

int Verify(const std::string& dataset_path, const std::string& json_path) {
  const gtx::Dataset d = gtx::LoadDataset(dataset_path);
  const gtx::VerificationReport r = gtx::VerifyDataset(d);
  ordered_json j;
  j["total_pos"] = r.total_pos;
  j["verified"] = r.verified;
  j["noise_free"] = gtx::CheckNoiseFree(d);
  j["failures"] = ordered_json::array();
  for (const auto& f : r.failures) {
    j["failures"].push_back({{"instance", f.instance},
                             {"explanation", d.instances[f.instance].MaskedExplanation()},
                             {"witness", f.witness},
                             {"witness_string", d.instances[f.witness].string}});
  }
  if (!json_path.empty()) Emit(j, json_path);
  std::cout << r.verified << "/" << r.total_pos << " explanations verified, "
            << r.failures.size() << " failures\n";
  return r.ok() ? 0 : 1;
}

int TrainEval(const std::string& dataset_path, const std::string& out_dir,
              gtx::ExperimentConfig config) {
  const gtx::Dataset d = gtx::LoadDataset(dataset_path);
  config.seed = SeedFromEnv(config.seed);
  const gtx::Evaluation e = gtx::EvaluateDataset(d, config, config.seed);
  const std::filesystem::path dir(out_dir);
  gtx::WriteFile(dir / "model.json", e.model.ToJson());
  gtx::WriteFile(dir / "predictions.csv", gtx::FormatPredictionsCsv(e.predictions));
  for (const gtx::AttributionFile& f : e.attributions) {
    gtx::WriteFile(dir / ("attributions_" + f.explainer + ".json"),
                   gtx::FormatAttributionJson(f));
  }
  std::cout << "train AUC " << e.train_auc << ", test AUC " << e.test_auc << "\n";
  return 0;
}

int Score(const std::string& dataset_path, const std::string& attr_path, std::size_t k,
          bool magnitude, const std::string& json_path) {
  const gtx::Dataset d = gtx::LoadDataset(dataset_path);
  const gtx::AttributionFile a = gtx::ParseAttributionJson(gtx::ReadFile(attr_path));
  const gtx::KAccuracySummary s = gtx::ScoreAttributionFile(
      d, a, k, magnitude ? gtx::TopKMode::kMagnitude : gtx::TopKMode::kSigned);
  ordered_json j;
  j["explainer"] = a.explainer;
  j["k"] = s.k;
  j["mean"] = s.mean ? ordered_json(*s.mean) : ordered_json(nullptr);
  j["std"] = s.std ? ordered_json(*s.std) : ordered_json(nullptr);
  j["num_scored"] = s.num_scored;
  j["num_skipped"] = s.num_skipped;
  j["per_instance"] = ordered_json::array();
  for (const auto& [index, acc] : s.per_instance) {
    j["per_instance"].push_back({{"index", index}, {"k_accuracy", acc}});
  }
  if (!json_path.empty()) Emit(j, json_path);
  std::cout << a.explainer << ": k=" << k << " mean "
            << (s.mean ? std::to_string(*s.mean) : std::string("n/a")) << " over "
            << s.num_scored << " instances (" << s.num_skipped << " skipped)\n";
  return 0;
}

int Experiment(const std::string& config_path, const std::string& out_dir, bool artifacts,
               bool quiet) {
  gtx::ExperimentConfig config = gtx::ParseExperimentConfig(gtx::ReadFile(config_path));
  gtx::ApplySeedOverride(config);
  if (artifacts) config.artifact_dir = std::filesystem::path(out_dir) / "artifacts";
  const gtx::ExperimentResult result =
      gtx::RunExperiment(config, [quiet](const gtx::GrammarRun& r) {
        if (quiet) return;
        std::cerr << gtx::CellName(r.cell) << " g" << r.replicate << ": ";
        if (r.ok) {
          std::cerr << "auc " << r.test_auc;
          for (const auto& e : r.explainers) {
            double sum = 0;
            for (double v : e.accuracies) sum += v;
            std::cerr << ", " << e.explainer << " "
                      << (e.accuracies.empty() ? 0.0 : sum / e.accuracies.size());
          }
        } else {
          std::cerr << "failed: " << r.error;
        }
        std::cerr << "\n";
      });
  gtx::WriteReport(result, out_dir);
  std::cout << gtx::FormatCorrelationsCsv(gtx::SweepCorrelations(result), config.explainers);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grammar-based benchmarks with ground-truth explanations"};
  app.require_subcommand(1);

  std::string grammar_path;
  auto* check = app.add_subcommand("check-grammar", "Validate a grammar file");
  check->add_option("grammar", grammar_path, "Grammar file")->required();

  std::string parse_string;
  std::size_t parse_bound = gtx::kDefaultParseLengthBound;
  auto* count = app.add_subcommand("count-parses", "Count parse trees of a string");
  count->add_option("--grammar", grammar_path)->required();
  count->add_option("--string", parse_string)->required();
  count->add_option("--max-length", parse_bound);

  gtx::GrammarSpec spec;
  std::string out;
  auto* gen_grammar = app.add_subcommand("gen-grammar", "Synthesize a random e-grammar");
  gen_grammar->add_option("--nonterminals", spec.num_nonterminals);
  gen_grammar->add_option("--complexity", spec.target_g_complexity);
  gen_grammar->add_option("--alphabet-size", spec.alphabet_size);
  gen_grammar->add_option("--rhs-length", spec.terminal_rhs_length);
  gen_grammar->add_option("--terminal-nonterminals", spec.num_terminal_nonterminals);
  gen_grammar->add_option("--terminal-rules", spec.num_terminal_rules);
  gen_grammar->add_option("--seed", spec.seed);
  gen_grammar->add_option("-o,--out", out, "Output file (default stdout)");

  std::size_t length = 20;
  std::uint32_t threshold = 6;
  gtx::StopConfig stop;
  std::uint64_t seed = 1;
  bool allow_noncompliant = false;
  auto* gen_dataset = app.add_subcommand("gen-dataset", "Generate a labeled dataset");
  gen_dataset->add_option("--grammar", grammar_path)->required();
  gen_dataset->add_option("--length", length)->required();
  gen_dataset->add_option("--threshold", threshold)->required();
  gen_dataset->add_option("--size", stop.target_size);
  gen_dataset->add_option("--min-pos", stop.min_pos_ratio);
  gen_dataset->add_option("--max-pos", stop.max_pos_ratio);
  gen_dataset->add_option("--max-attempts", stop.max_attempts);
  gen_dataset->add_option("--seed", seed);
  gen_dataset->add_flag("--allow-noncompliant", allow_noncompliant);
  gen_dataset->add_option("-o,--out", out)->required();

  std::string dataset_path;
  std::string json_path;
  auto* verify = app.add_subcommand("verify", "Check every explanation against the dataset");
  verify->add_option("--dataset", dataset_path)->required();
  verify->add_option("--json", json_path);

  gtx::ExperimentConfig train_config;
  std::string explainers = "shapley,lime";
  auto* train_eval =
      app.add_subcommand("train-eval", "Train a forest, predict and explain the test split");
  train_eval->add_option("--dataset", dataset_path)->required();
  train_eval->add_option("--out", out)->required();
  train_eval->add_option("--seed", train_config.seed);
  train_eval->add_option("--trees", train_config.forest.num_trees);
  train_eval->add_option("--train-fraction", train_config.train_fraction);
  train_eval->add_option("--explainers", explainers, "Comma-separated: shapley,lime");
  train_eval->add_option("--shapley-samples", train_config.explain.shapley_samples);
  train_eval->add_option("--lime-samples", train_config.explain.lime_samples);
  train_eval->add_option("--max-explained", train_config.max_explained, "0 = all");

  std::string attr_path;
  std::size_t k = 8;
  bool magnitude = false;
  auto* score = app.add_subcommand("score", "k-accuracy of an attribution file");
  score->add_option("--dataset", dataset_path)->required();
  score->add_option("--attr", attr_path)->required();
  score->add_option("--k", k)->required();
  score->add_option("--json", json_path);
  score->add_flag("--magnitude", magnitude, "Rank positions by |score|");

  std::string config_path;
  bool artifacts = false;
  bool quiet = false;
  auto* experiment = app.add_subcommand("experiment", "Run a sweep and write reports");
  experiment->add_option("--config", config_path)->required();
  experiment->add_option("--out", out)->required();
  experiment->add_flag("--artifacts", artifacts, "Keep datasets and attribution files");
  experiment->add_flag("--quiet", quiet);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return CheckGrammar(grammar_path);
    if (*count) return CountParses(grammar_path, parse_string, parse_bound);
    if (*gen_grammar) return GenGrammar(spec, out);
    if (*gen_dataset) {
      return GenDataset(grammar_path, length, threshold, stop, seed, allow_noncompliant, out);
    }
    if (*verify) return Verify(dataset_path, json_path);
    if (*train_eval) {
      train_config.explainers.clear();
      std::stringstream ss(explainers);
      for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty()) train_config.explainers.push_back(item);
      }
      train_config.Validate();
      return TrainEval(dataset_path, out, train_config);
    }
    if (*score) return Score(dataset_path, attr_path, k, magnitude, json_path);
    if (*experiment) return Experiment(config_path, out, artifacts, quiet);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
