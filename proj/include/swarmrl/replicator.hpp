#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "swarmrl/policy.hpp"
#include "swarmrl/simplex.hpp"
#include "swarmrl/trajectory.hpp"

namespace swarmrl {

/// Taylor (TRD) or Maynard Smith (MRD) replicator dynamic.
enum class OdeKind { TRD, MRD };

std::string_view to_string(OdeKind kind);

struct OdeConfig {
  OdeKind kind = OdeKind::TRD;
  /// Euler step.
  double delta = 1.0;
  /// Integration horizon; at least one step.
  double t_final = 1.0;
  /// Record every `record_stride`-th state (the final state is always recorded).
  std::uint64_t record_stride = 1;
};

/// Number of Euler steps covering [0, t_final]: ceil(t_final / delta), with
/// near-integer ratios rounded so that e.g. 100 / 0.001 gives exactly 100000.
std::uint64_t step_count(double t_final, double delta);

/// delta * pi_a * (q_a - v).
Direction trd_displacement(const Simplex& pi, std::span<const double> q, double delta);
/// delta * (pi_a / v) * (q_a - v). Throws NumericError when v <= 1e-12.
Direction mrd_displacement(const Simplex& pi, std::span<const double> q, double delta);

/// One Euler step of the TRD. Throws StepSizeError when delta * max|q_a - v| > 1
/// or when the step pushes an entry below -1e-9.
Simplex trd_step(const Simplex& pi, std::span<const double> q, double delta);
/// One Euler step of the MRD. Throws NumericError for v <= 1e-12 and StepSizeError
/// when the step pushes an entry below -1e-9.
Simplex mrd_step(const Simplex& pi, std::span<const double> q, double delta);

/// Forward-Euler trajectory from pi0. Records time, value and the mass on
/// argmax(q). Step failures are rethrown with the failing step index.
Trajectory integrate(const OdeConfig& cfg, const Simplex& pi0, std::span<const double> q);

}  // namespace swarmrl
