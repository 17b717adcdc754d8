#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gtx/encoding.hpp"

namespace gtx {

struct ExplainerConfig {
  std::size_t shapley_samples = 2000;
  std::size_t background_size = 100;
  std::size_t lime_samples = 5000;
  double lime_flip_prob = 0.3;
  // 0 selects 0.75 * sqrt(length).
  double lime_kernel_width = 0.0;
  double ridge_penalty = 1e-3;

  double KernelWidth(std::size_t length) const;
  // Throws std::invalid_argument when a field is out of range.
  void Validate() const;
};

inline constexpr std::size_t kExactShapleyMaxLength = 12;

// Monte-Carlo Shapley values of `f` at `x`. Each sample draws a permutation and
// a background instance, then walks the permutation switching features from
// the background value to x's value, crediting each step's change in f to the
// switched position.
std::vector<double> ShapleyMonteCarlo(const ScoreFunction& f,
                                      std::span<const std::uint8_t> x,
                                      std::span<const EncodedInstance> background,
                                      std::size_t num_samples, std::uint64_t seed);

// Exact Shapley values for the game v(C) = mean_b f(x on C, b elsewhere).
// Throws LengthBoundError when |x| > kExactShapleyMaxLength.
std::vector<double> ExactShapley(const ScoreFunction& f, std::span<const std::uint8_t> x,
                                 std::span<const EncodedInstance> background);

// Mean of f over the background; the Shapley values of x sum to f(x) minus this.
double BaselineValue(const ScoreFunction& f, std::span<const EncodedInstance> background);

struct LimeResult {
  std::vector<double> scores;
  double intercept = 0.0;
  // No perturbation differed from x in any position; scores are all zero.
  bool degenerate = false;
};

// Local linear surrogate. Perturbations replace each position independently
// with a uniformly chosen different symbol; the surrogate regresses f on the
// indicators [z_i == x_i] under an exponential Hamming kernel with a ridge
// penalty on the slopes.
LimeResult LimeLocal(const ScoreFunction& f, std::span<const std::uint8_t> x,
                     std::size_t alphabet_size, const ExplainerConfig& config,
                     std::uint64_t seed);

// Up to `size` training rows drawn without replacement.
std::vector<EncodedInstance> SampleBackground(std::span<const EncodedInstance> rows,
                                              std::size_t size, std::uint64_t seed);

}  // namespace gtx
