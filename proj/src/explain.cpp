#include "gtx/explain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "gtx/parse_count.hpp"
#include "gtx/random.hpp"

namespace gtx {
namespace {

void CheckBackground(std::span<const std::uint8_t> x,
                     std::span<const EncodedInstance> background) {
  if (background.empty()) throw std::invalid_argument("background sample is empty");
  for (const EncodedInstance& b : background) {
    if (b.size() != x.size()) {
      throw std::invalid_argument("background instance length does not match x");
    }
  }
}

}  // namespace

double ExplainerConfig::KernelWidth(std::size_t length) const {
  return lime_kernel_width > 0 ? lime_kernel_width
                               : 0.75 * std::sqrt(static_cast<double>(length));
}

void ExplainerConfig::Validate() const {
  if (shapley_samples == 0) throw std::invalid_argument("shapley_samples must be positive");
  if (background_size == 0) throw std::invalid_argument("background_size must be positive");
  if (lime_samples == 0) throw std::invalid_argument("lime_samples must be positive");
  if (!(lime_flip_prob >= 0.0 && lime_flip_prob < 1.0)) {
    throw std::invalid_argument("lime_flip_prob must lie in [0, 1)");
  }
  if (!(lime_kernel_width >= 0.0)) {
    throw std::invalid_argument("lime_kernel_width must be non-negative");
  }
  if (!(ridge_penalty >= 0.0)) throw std::invalid_argument("ridge_penalty must be non-negative");
}

std::vector<double> ShapleyMonteCarlo(const ScoreFunction& f,
                                      std::span<const std::uint8_t> x,
                                      std::span<const EncodedInstance> background,
                                      std::size_t num_samples, std::uint64_t seed) {
  if (num_samples == 0) throw std::invalid_argument("num_samples must be positive");
  CheckBackground(x, background);
  const std::size_t l = x.size();
  Rng rng(seed);
  std::vector<std::size_t> order(l);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> sum(l, 0.0);
  EncodedInstance z(l);
  for (std::size_t s = 0; s < num_samples; ++s) {
    rng.Shuffle(order.begin(), order.end());
    const EncodedInstance& b = background[rng.Index(background.size())];
    z.assign(b.begin(), b.end());
    double previous = f(z);
    for (std::size_t i : order) {
      if (z[i] == x[i]) continue;  // the switch cannot change f
      z[i] = x[i];
      const double current = f(z);
      sum[i] += current - previous;
      previous = current;
    }
  }
  for (double& v : sum) v /= static_cast<double>(num_samples);
  return sum;
}

double BaselineValue(const ScoreFunction& f, std::span<const EncodedInstance> background) {
  if (background.empty()) throw std::invalid_argument("background sample is empty");
  double sum = 0.0;
  for (const EncodedInstance& b : background) sum += f(b);
  return sum / static_cast<double>(background.size());
}

std::vector<double> ExactShapley(const ScoreFunction& f, std::span<const std::uint8_t> x,
                                 std::span<const EncodedInstance> background) {
  const std::size_t l = x.size();
  if (l > kExactShapleyMaxLength) {
    throw LengthBoundError("exact Shapley enumeration is limited to length " +
                           std::to_string(kExactShapleyMaxLength));
  }
  CheckBackground(x, background);
  const std::size_t num_coalitions = std::size_t{1} << l;

  std::vector<double> value(num_coalitions, 0.0);
  EncodedInstance z(l);
  for (std::size_t c = 0; c < num_coalitions; ++c) {
    double sum = 0.0;
    for (const EncodedInstance& b : background) {
      for (std::size_t i = 0; i < l; ++i) z[i] = (c >> i) & 1 ? x[i] : b[i];
      sum += f(z);
    }
    value[c] = sum / static_cast<double>(background.size());
  }

  // weight[s] = s! (l - s - 1)! / l!
  std::vector<double> weight(l, 0.0);
  for (std::size_t s = 0; s < l; ++s) {
    weight[s] = std::exp(std::lgamma(s + 1.0) + std::lgamma(static_cast<double>(l - s)) -
                         std::lgamma(l + 1.0));
  }
  std::vector<double> phi(l, 0.0);
  for (std::size_t i = 0; i < l; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t c = 0; c < num_coalitions; ++c) {
      if (c & bit) continue;
      const double delta = value[c | bit] - value[c];
      if (delta != 0.0) phi[i] += weight[std::popcount(c)] * delta;
    }
  }
  return phi;
}

LimeResult LimeLocal(const ScoreFunction& f, std::span<const std::uint8_t> x,
                     std::size_t alphabet_size, const ExplainerConfig& config,
                     std::uint64_t seed) {
  config.Validate();
  if (alphabet_size < 2) throw std::invalid_argument("perturbation needs two symbols");
  const std::size_t l = x.size();
  const std::size_t n = config.lime_samples;
  const double width = config.KernelWidth(l);

  Rng rng(seed);
  Eigen::MatrixXd indicators(n, l);
  Eigen::VectorXd target(n);
  Eigen::VectorXd weight(n);
  EncodedInstance z(l);
  bool any_change = false;
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t distance = 0;
    for (std::size_t i = 0; i < l; ++i) {
      z[i] = x[i];
      if (rng.Bernoulli(config.lime_flip_prob)) {
        const auto other = static_cast<std::uint8_t>(rng.Index(alphabet_size - 1));
        z[i] = other >= x[i] ? other + 1 : other;
        ++distance;
      }
      indicators(r, i) = z[i] == x[i] ? 1.0 : 0.0;
    }
    any_change = any_change || distance > 0;
    const double d = static_cast<double>(distance);
    weight(r) = std::exp(-(d * d) / (width * width));
    target(r) = f(z);
  }

  LimeResult result;
  result.scores.assign(l, 0.0);
  const double total_weight = weight.sum();
  const double mean_target = weight.dot(target) / total_weight;
  if (!any_change) {
    result.degenerate = true;
    result.intercept = mean_target;
    return result;
  }
  if ((target.array() == target(0)).all()) {
    result.intercept = target(0);
    return result;
  }

  // The intercept is left unpenalized by centering on the weighted means.
  const Eigen::RowVectorXd mean_x = (weight.transpose() * indicators) / total_weight;
  const Eigen::MatrixXd centered = indicators.rowwise() - mean_x;
  const Eigen::VectorXd centered_y = target.array() - mean_target;
  const Eigen::VectorXd sqrt_w = weight.array().sqrt();
  const Eigen::MatrixXd a = sqrt_w.asDiagonal() * centered;
  const Eigen::VectorXd b = sqrt_w.asDiagonal() * centered_y;

  Eigen::VectorXd beta;
  if (config.ridge_penalty > 0) {
    Eigen::MatrixXd normal = a.transpose() * a;
    normal.diagonal().array() += config.ridge_penalty;
    beta = normal.ldlt().solve(a.transpose() * b);
  } else {
    beta = a.completeOrthogonalDecomposition().solve(b);
  }
  for (std::size_t i = 0; i < l; ++i) result.scores[i] = beta(static_cast<Eigen::Index>(i));
  result.intercept = mean_target - mean_x.dot(beta);
  return result;
}

std::vector<EncodedInstance> SampleBackground(std::span<const EncodedInstance> rows,
                                              std::size_t size, std::uint64_t seed) {
  std::vector<std::size_t> index(rows.size());
  std::iota(index.begin(), index.end(), 0);
  Rng rng(seed);
  rng.Shuffle(index.begin(), index.end());
  index.resize(std::min(size, index.size()));
  std::vector<EncodedInstance> out;
  out.reserve(index.size());
  for (std::size_t i : index) out.push_back(rows[i]);
  return out;
}

}  // namespace gtx
