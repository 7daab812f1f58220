#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "swarmrl/rng.hpp"

namespace swarmrl {

/// Probability vector over n arms/types. Serves both as an RL policy and as a
/// population vector. Entries lie in [0, 1] and sum to 1 within kSumTolerance.
class Simplex {
 public:
  static constexpr double kSumTolerance = 1e-9;

  Simplex() = default;
  /// Validates; throws ContractError if `probs` is not a distribution.
  explicit Simplex(std::vector<double> probs);

  static Simplex uniform(std::size_t n);
  static Simplex pure(std::size_t n, std::size_t arm);
  /// Draw from the flat Dirichlet distribution (uniform on the simplex).
  static Simplex random(std::size_t n, RngStream& rng);
  /// Divide non-negative weights by their sum. Throws NumericError for a zero sum.
  static Simplex normalized(std::vector<double> weights);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t a) const { return probs_[a]; }
  std::span<const double> probs() const { return probs_; }
  const std::vector<double>& vector() const { return probs_; }
  double sum() const;
  /// Index of the largest entry (lowest index on ties).
  std::size_t argmax() const;
  /// True iff entry `arm` is strictly larger than every other entry.
  bool strict_argmax_is(std::size_t arm) const;

  bool operator==(const Simplex&) const = default;

 private:
  std::vector<double> probs_;
};

/// Sum of `xs` in ascending order, so the result does not depend on how the
/// entries are arranged.
double ordered_sum(std::span<const double> xs);

/// Change between two states of equal dimension: `after - before`.
std::vector<double> displacement(const Simplex& before, const Simplex& after);

}  // namespace swarmrl
