#include "swarmrl/population.hpp"

#include <string>

#include "swarmrl/errors.hpp"

namespace swarmrl {
namespace {

std::vector<double> draw_payoffs(const Population& pop, const BanditEnv& env, RngStream& rng,
                                 StepDiagnostics* diagnostics) {
  std::vector<double> payoffs(pop.size());
  double total = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    payoffs[i] = sample_reward(env, pop[i], rng);
    total += payoffs[i];
  }
  if (diagnostics) {
    diagnostics->payoff_sum += total;
    diagnostics->payoff_count += pop.size();
  }
  return payoffs;
}

void check_env(const Population& pop, const BanditEnv& env) {
  if (env.n_arms() != pop.n_types()) {
    throw ContractError("population has " + std::to_string(pop.n_types()) +
                        " types but the environment has " + std::to_string(env.n_arms()) +
                        " arms");
  }
}

std::size_t pick(std::span<const double> weights, double u) {
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t a = 0; a < weights.size(); ++a) {
    if (weights[a] <= 0.0) continue;
    cumulative += weights[a];
    last_positive = a;
    if (u < cumulative) return a;
  }
  return last_positive;
}

}  // namespace

Population::Population(std::vector<TypeIndex> members, std::size_t n_types)
    : members_(std::move(members)), n_types_(n_types) {
  if (members_.size() < 2) throw ConfigError("population needs at least 2 members");
  if (n_types_ == 0) throw ConfigError("population needs at least one type");
  for (TypeIndex t : members_) {
    if (t >= n_types_) throw std::out_of_range("member type " + std::to_string(t) + " out of range");
  }
}

std::vector<std::size_t> Population::counts() const {
  std::vector<std::size_t> c(n_types_, 0);
  for (TypeIndex t : members_) ++c[t];
  return c;
}

Population init_population(std::size_t pop_size, std::size_t n_types) {
  if (n_types == 0 || pop_size < n_types) {
    throw ConfigError("population size " + std::to_string(pop_size) +
                      " must be at least the number of types " + std::to_string(n_types));
  }
  const std::size_t base = pop_size / n_types;
  const std::size_t extra = pop_size % n_types;
  std::vector<TypeIndex> members;
  members.reserve(pop_size);
  for (std::size_t t = 0; t < n_types; ++t) {
    const std::size_t count = base + (t < extra ? 1 : 0);
    members.insert(members.end(), count, static_cast<TypeIndex>(t));
  }
  return Population(std::move(members), n_types);
}

Simplex population_vector(const Population& pop) {
  const auto counts = pop.counts();
  std::vector<double> p(counts.size());
  const double n = static_cast<double>(pop.size());
  for (std::size_t a = 0; a < counts.size(); ++a) p[a] = static_cast<double>(counts[a]) / n;
  return Simplex(std::move(p));
}

Population vr_resolve(const Population& pop, std::span<const double> payoffs,
                      std::span<const std::size_t> partners, std::span<const double> uniforms) {
  const std::size_t n = pop.size();
  if (payoffs.size() != n || partners.size() != n || uniforms.size() != n) {
    throw ContractError("vr_resolve inputs must have one entry per member");
  }
  std::vector<TypeIndex> next(pop.members().begin(), pop.members().end());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = partners[i];
    if (j >= n) throw std::out_of_range("partner index out of range");
    if (uniforms[i] < payoffs[j]) next[i] = pop[j];
  }
  return Population(std::move(next), pop.n_types());
}

Population vr_step(const Population& pop, const BanditEnv& env, RngStream& rng,
                   StepDiagnostics* diagnostics) {
  check_env(pop, env);
  const std::size_t n = pop.size();
  const std::vector<double> payoffs = draw_payoffs(pop, env, rng, diagnostics);
  std::vector<std::size_t> partners(n);
  std::vector<double> uniforms(n);
  for (std::size_t i = 0; i < n; ++i) {
    partners[i] = rng.index(n);
    uniforms[i] = rng.uniform();
  }
  return vr_resolve(pop, payoffs, partners, uniforms);
}

Population vr_sequential_step(const Population& pop, const BanditEnv& env, RngStream& rng,
                              StepDiagnostics* diagnostics) {
  check_env(pop, env);
  const std::size_t n = pop.size();
  std::vector<TypeIndex> members(pop.members().begin(), pop.members().end());
  for (std::size_t revision = 0; revision < n; ++revision) {
    const std::size_t i = rng.index(n);
    const std::size_t j = rng.index(n);
    const double payoff = sample_reward(env, members[j], rng);
    if (diagnostics) {
      diagnostics->payoff_sum += payoff;
      ++diagnostics->payoff_count;
    }
    if (rng.uniform() < payoff) members[i] = members[j];
  }
  return Population(std::move(members), pop.n_types());
}

std::optional<std::vector<double>> vote_distribution(const Population& pop,
                                                     std::span<const double> payoffs) {
  if (payoffs.size() != pop.size()) {
    throw ContractError("vote_distribution needs one payoff per member");
  }
  std::vector<double> votes(pop.n_types(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (!(payoffs[i] >= 0.0)) throw ContractError("payoffs must be non-negative");
    votes[pop[i]] += payoffs[i];
    total += payoffs[i];
  }
  if (total <= kSilentPopulation) return std::nullopt;
  for (double& v : votes) v /= total;
  return votes;
}

Population wvr_resolve(const Population& pop, std::span<const double> votes,
                       std::span<const double> uniforms) {
  if (votes.size() != pop.n_types() || uniforms.size() != pop.size()) {
    throw ContractError("wvr_resolve input sizes do not match the population");
  }
  std::vector<TypeIndex> next(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) {
    next[i] = static_cast<TypeIndex>(pick(votes, uniforms[i]));
  }
  return Population(std::move(next), pop.n_types());
}

Population wvr_step(const Population& pop, const BanditEnv& env, RngStream& rng,
                    StepDiagnostics* diagnostics) {
  check_env(pop, env);
  const std::vector<double> payoffs = draw_payoffs(pop, env, rng, diagnostics);
  const auto votes = vote_distribution(pop, payoffs);
  if (!votes) {
    if (diagnostics) ++diagnostics->degenerate_steps;
    return pop;
  }
  std::vector<double> uniforms(pop.size());
  for (double& u : uniforms) u = rng.uniform();
  return wvr_resolve(pop, *votes, uniforms);
}

}  // namespace swarmrl
