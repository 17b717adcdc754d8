#include "gtx/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gtx/dataset_io.hpp"

namespace gtx {
namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void Add(double v) {
    const double t = sum_ + v;
    compensation_ += std::abs(sum_) >= std::abs(v) ? (sum_ - t) + v : (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace

ExplanationMask TopKMask(std::span<const double> scores, std::size_t k, TopKMode mode) {
  if (k == 0 || k > scores.size()) {
    throw std::invalid_argument("k must lie in [1, " + std::to_string(scores.size()) + "]");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](std::size_t i) {
    return mode == TopKMode::kMagnitude ? std::abs(scores[i]) : scores[i];
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) > key(b); });
  order.resize(k);
  return ExplanationMask(scores.size(), std::move(order));
}

double KAccuracy(const ExplanationMask& predicted, const ExplanationMask& truth,
                 std::size_t k) {
  if (k == 0 || predicted.size() != k) {
    throw std::invalid_argument("predicted mask must cover exactly k positions");
  }
  if (predicted.length() != truth.length()) {
    throw std::invalid_argument("mask lengths differ");
  }
  if (truth.empty()) throw std::invalid_argument("ground-truth mask is empty");
  std::size_t overlap = 0;
  for (std::size_t p : predicted.covered()) overlap += truth.contains(p) ? 1 : 0;
  return static_cast<double>(overlap) / static_cast<double>(k);
}

KAccuracySummary ScoreAttributionFile(const Dataset& dataset, const AttributionFile& file,
                                      std::size_t k, TopKMode mode) {
  const std::string hash = DatasetHash(dataset);
  if (file.dataset_sha256 != hash) {
    throw HashMismatchError("attribution file refers to dataset " + file.dataset_sha256 +
                            ", loaded dataset is " + hash);
  }
  KAccuracySummary summary;
  summary.k = k;
  std::vector<double> values;
  for (const AttributionVector& a : file.instances) {
    if (a.index >= dataset.instances.size()) {
      throw MissingInstanceError("index " + std::to_string(a.index) +
                                 " is not in the dataset");
    }
    if (a.scores.size() != dataset.string_length) {
      throw MissingInstanceError("index " + std::to_string(a.index) + " has " +
                                 std::to_string(a.scores.size()) + " scores, expected " +
                                 std::to_string(dataset.string_length));
    }
    const LabeledInstance& truth = dataset.instances[a.index];
    if (a.predicted_label != Label::kPos || truth.label != Label::kPos) {
      ++summary.num_skipped;
      continue;
    }
    const double acc = KAccuracy(TopKMask(a.scores, k, mode), truth.explanation, k);
    summary.per_instance.emplace_back(a.index, acc);
    values.push_back(acc);
  }
  summary.num_scored = values.size();
  if (const auto s = Summarize(values)) {
    summary.mean = s->mean;
    summary.std = s->std;
  }
  return summary;
}

double Auc(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("length mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Walk groups of tied scores from low to high, counting POS-above-NEG pairs.
  double concordant = 0.0;
  double neg_below = 0.0;
  double total_pos = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    double pos = 0.0, neg = 0.0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == Label::kPos ? pos : neg) += 1.0;
      ++j;
    }
    concordant += pos * neg_below + 0.5 * pos * neg;
    neg_below += neg;
    total_pos += pos;
    i = j;
  }
  if (total_pos == 0.0 || neg_below == 0.0) {
    throw DegenerateInputError("AUC needs both classes");
  }
  return concordant / (total_pos * neg_below);
}

double Pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("length mismatch");
  if (xs.size() < 2) throw DegenerateInputError("correlation needs two points");
  const auto n = static_cast<double>(xs.size());
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx.Add(xs[i]);
    sy.Add(ys[i]);
  }
  const double mx = sx.value() / n;
  const double my = sy.value() / n;
  CompensatedSum sxy, sxx, syy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy.Add(dx * dy);
    sxx.Add(dx * dx);
    syy.Add(dy * dy);
  }
  if (sxx.value() <= 0.0 || syy.value() <= 0.0) {
    throw DegenerateInputError("correlation of a zero-variance series");
  }
  const double r = sxy.value() / std::sqrt(sxx.value() * syy.value());
  return std::clamp(r, -1.0, 1.0);
}

std::optional<MeanStd> Summarize(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  const auto n = static_cast<double>(values.size());
  CompensatedSum sum;
  for (double v : values) sum.Add(v);
  MeanStd out;
  out.mean = sum.value() / n;
  if (values.size() > 1) {
    CompensatedSum sq;
    for (double v : values) sq.Add((v - out.mean) * (v - out.mean));
    out.std = std::sqrt(sq.value() / (n - 1.0));
  }
  return out;
}

}  // namespace gtx
