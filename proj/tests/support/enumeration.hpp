#pragma once

// Exhaustive enumeration of one synchronous voter / weighted-voter step for tiny
// populations with deterministic payoffs. The step outcome for each elementary
// event is computed by the library's deterministic resolvers; the probability
// weights and the expected-change comparison target are computed here.

#include <cstddef>
#include <functional>
#include <vector>

#include "oracles.hpp"
#include "swarmrl/population.hpp"

namespace swarmrl::enumeration {

/// Expected population vector after one VR step, summing over every partner
/// assignment (N^N equally likely) and every switch/no-switch outcome.
inline std::vector<double> expected_vr_vector(const Population& pop,
                                              const std::vector<double>& payoffs) {
  const std::size_t n = pop.size();
  std::vector<double> expected(pop.n_types(), 0.0);
  std::vector<std::size_t> partners(n, 0);
  const double pairing_weight = std::pow(static_cast<double>(n), -static_cast<double>(n));
  for (;;) {
    // Members whose partner pays something make a Bernoulli(payoff) decision.
    std::vector<std::size_t> deciding;
    for (std::size_t i = 0; i < n; ++i) {
      if (payoffs[partners[i]] > 0.0) deciding.push_back(i);
    }
    for (std::size_t mask = 0; mask < (std::size_t{1} << deciding.size()); ++mask) {
      // uniform 0 forces a switch whenever payoff > 0; uniform 1 never switches.
      std::vector<double> uniforms(n, 1.0);
      double w = pairing_weight;
      for (std::size_t d = 0; d < deciding.size(); ++d) {
        const double p = payoffs[partners[deciding[d]]];
        if (mask >> d & 1U) {
          uniforms[deciding[d]] = 0.0;
          w *= p;
        } else {
          w *= 1.0 - p;
        }
      }
      if (w == 0.0) continue;
      const Population next = vr_resolve(pop, payoffs, partners, uniforms);
      const auto counts = next.counts();
      for (std::size_t a = 0; a < counts.size(); ++a) {
        expected[a] += w * static_cast<double>(counts[a]) / static_cast<double>(n);
      }
    }
    std::size_t i = 0;
    while (i < n && ++partners[i] == n) partners[i++] = 0;
    if (i == n) break;
  }
  return expected;
}

/// Expected population vector after one WVR step, summing over every joint
/// opinion draw (n_types^N outcomes) with the pooled vote shares as weights.
inline std::vector<double> expected_wvr_vector(const Population& pop,
                                               const std::vector<double>& payoffs) {
  const std::size_t n = pop.size();
  const std::size_t types = pop.n_types();
  const auto votes = vote_distribution(pop, payoffs);
  std::vector<double> expected(types, 0.0);
  if (!votes) {
    const auto counts = pop.counts();
    for (std::size_t a = 0; a < types; ++a) expected[a] = static_cast<double>(counts[a]) / n;
    return expected;
  }
  // Left edge of each opinion's interval in [0,1); resolving with that point
  // selects the opinion.
  std::vector<double> left(types, 0.0);
  for (std::size_t a = 1; a < types; ++a) left[a] = left[a - 1] + (*votes)[a - 1];
  std::vector<std::size_t> choice(n, 0);
  for (;;) {
    double w = 1.0;
    std::vector<double> uniforms(n);
    for (std::size_t i = 0; i < n; ++i) {
      w *= (*votes)[choice[i]];
      uniforms[i] = left[choice[i]];
    }
    if (w > 0.0) {
      const auto counts = wvr_resolve(pop, *votes, uniforms).counts();
      for (std::size_t a = 0; a < types; ++a) {
        expected[a] += w * static_cast<double>(counts[a]) / static_cast<double>(n);
      }
    }
    std::size_t i = 0;
    while (i < n && ++choice[i] == types) choice[i++] = 0;
    if (i == n) break;
  }
  return expected;
}

/// Visit every population of `n` members over `types` types with every type
/// sequence (types^n), calling `visit(pop)`.
inline void for_each_population(std::size_t n, std::size_t types,
                                const std::function<void(const Population&)>& visit) {
  std::vector<TypeIndex> members(n, 0);
  for (;;) {
    visit(Population(members, types));
    std::size_t i = 0;
    while (i < n && ++members[i] == types) members[i++] = 0;
    if (i == n) break;
  }
}

}  // namespace swarmrl::enumeration
