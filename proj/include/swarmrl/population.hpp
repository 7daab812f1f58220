#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "swarmrl/env.hpp"
#include "swarmrl/rng.hpp"
#include "swarmrl/simplex.hpp"

namespace swarmrl {

using TypeIndex = std::uint32_t;

/// N individuals, each holding a type/opinion in [0, n_types).
class Population {
 public:
  Population(std::vector<TypeIndex> members, std::size_t n_types);

  std::size_t size() const { return members_.size(); }
  std::size_t n_types() const { return n_types_; }
  std::span<const TypeIndex> members() const { return members_; }
  TypeIndex operator[](std::size_t i) const { return members_[i]; }
  std::vector<std::size_t> counts() const;

  bool operator==(const Population&) const = default;

 private:
  std::vector<TypeIndex> members_;
  std::size_t n_types_;
};

/// Equal shares per type; the N mod n leftover members go to the lowest types.
Population init_population(std::size_t pop_size, std::size_t n_types);

/// Fraction of members holding each type.
Simplex population_vector(const Population& pop);

/// Side information from stochastic steps.
struct StepDiagnostics {
  /// Steps that left the population untouched because every payoff was ~0.
  std::size_t degenerate_steps = 0;
  /// Sum and number of the payoffs drawn.
  double payoff_sum = 0.0;
  std::size_t payoff_count = 0;
};

// --- voter rule -------------------------------------------------------------

/// One synchronous voter-rule step. Every member draws its own payoff, picks a
/// partner uniformly from the whole population (itself included), and adopts the
/// partner's pre-step type with probability equal to the partner's payoff.
Population vr_step(const Population& pop, const BanditEnv& env, RngStream& rng,
                   StepDiagnostics* diagnostics = nullptr);

/// Deterministic core of vr_step: member i adopts the old type of partners[i]
/// iff uniforms[i] < payoffs[partners[i]].
Population vr_resolve(const Population& pop, std::span<const double> payoffs,
                      std::span<const std::size_t> partners, std::span<const double> uniforms);

/// N sequential single-member revisions against the current (not snapshot) state.
/// Exploratory mode; carries no replicator guarantee.
Population vr_sequential_step(const Population& pop, const BanditEnv& env, RngStream& rng,
                              StepDiagnostics* diagnostics = nullptr);

// --- weighted voter rule ----------------------------------------------------

/// Payoff-weighted share of votes per opinion. nullopt when the payoffs sum to
/// at most kSilentPopulation.
inline constexpr double kSilentPopulation = 1e-12;
std::optional<std::vector<double>> vote_distribution(const Population& pop,
                                                     std::span<const double> payoffs);

/// One synchronous weighted-voter step: every member draws a payoff, votes are
/// pooled, and every member resamples its opinion from the vote shares. A silent
/// population (all payoffs ~0) stays unchanged and is counted in `diagnostics`.
Population wvr_step(const Population& pop, const BanditEnv& env, RngStream& rng,
                    StepDiagnostics* diagnostics = nullptr);

/// Deterministic core of wvr_step: member i takes the opinion whose cumulative
/// vote share first exceeds uniforms[i].
Population wvr_resolve(const Population& pop, std::span<const double> votes,
                       std::span<const double> uniforms);

}  // namespace swarmrl
