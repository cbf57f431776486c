#pragma once

// Trial- and scenario-level parallel kernels. Each has a serial reference with
// identical results; the parallel versions distribute independent work items
// over OpenMP threads and reduce in item order.

#include "apnet/sim.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace apnet {

struct PropertyResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double worst = 0.0;      // largest residual observed
  double tolerance = 0.0;  // residual ceiling (0 for boolean properties)

  bool passed() const { return failures == 0; }
  friend bool operator==(const PropertyResult&, const PropertyResult&) = default;
};

struct PropertyReport {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::vector<PropertyResult> properties;

  bool passed() const;
  const PropertyResult& operator[](const std::string& name) const;
  friend bool operator==(const PropertyReport&, const PropertyReport&) = default;
};

/// Randomized checks on connected graphs with n in [2, 12]: Laplacian spectrum
/// ordering, pseudoinverse identity and symmetry, positivity of
/// lambda_min(L + K), traversal/spectral connectivity agreement, agent- vs
/// compact-form derivatives, recovery of the unweighted algorithm, column sums
/// of L_c, weight range and passivity. Throws std::invalid_argument for
/// trials == 0.
PropertyReport run_property_suite(std::size_t trials, std::uint64_t seed);
PropertyReport run_property_suite_serial(std::size_t trials, std::uint64_t seed);

void print_report(std::ostream& out, const PropertyReport& report);

/// Integrates independent scenarios. The first failure (in scenario order)
/// is rethrown after all items finish.
std::vector<Trajectory> integrate_batch(std::span<const Scenario> scenarios,
                                        const IntegrateOptions& options = {});
std::vector<Trajectory> integrate_batch_serial(std::span<const Scenario> scenarios,
                                               const IntegrateOptions& options = {});

}  // namespace apnet
