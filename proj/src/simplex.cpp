#include "swarmrl/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "swarmrl/errors.hpp"

namespace swarmrl {

Simplex::Simplex(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw ContractError("simplex must have at least one entry");
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ContractError("simplex entry " + std::to_string(p) + " outside [0, 1]");
    }
  }
  const double total = sum();
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw ContractError("simplex entries sum to " + std::to_string(total));
  }
}

Simplex Simplex::uniform(std::size_t n) {
  if (n == 0) throw ContractError("simplex must have at least one entry");
  return Simplex(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Simplex Simplex::pure(std::size_t n, std::size_t arm) {
  if (arm >= n) throw std::out_of_range("pure simplex arm out of range");
  std::vector<double> p(n, 0.0);
  p[arm] = 1.0;
  return Simplex(std::move(p));
}

Simplex Simplex::random(std::size_t n, RngStream& rng) {
  if (n == 0) throw ContractError("simplex must have at least one entry");
  std::vector<double> w(n);
  for (double& x : w) x = rng.exponential();
  return normalized(std::move(w));
}

Simplex Simplex::normalized(std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ContractError("weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw NumericError("cannot normalize weights that sum to zero");
  for (double& w : weights) w = std::min(1.0, w / total);
  return Simplex(std::move(weights));
}

double Simplex::sum() const { return std::accumulate(probs_.begin(), probs_.end(), 0.0); }

std::size_t Simplex::argmax() const {
  return static_cast<std::size_t>(std::max_element(probs_.begin(), probs_.end()) -
                                  probs_.begin());
}

bool Simplex::strict_argmax_is(std::size_t arm) const {
  if (arm >= probs_.size()) return false;
  for (std::size_t b = 0; b < probs_.size(); ++b) {
    if (b != arm && probs_[b] >= probs_[arm]) return false;
  }
  return true;
}

double ordered_sum(std::span<const double> xs) {
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (double x : sorted) total += x;
  return total;
}

std::vector<double> displacement(const Simplex& before, const Simplex& after) {
  if (before.size() != after.size()) throw ContractError("simplex dimension mismatch");
  std::vector<double> d(before.size());
  for (std::size_t a = 0; a < d.size(); ++a) d[a] = after[a] - before[a];
  return d;
}

}  // namespace swarmrl
