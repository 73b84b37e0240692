#pragma once

// Black-box discrimination between Lueders and von Neumann devices, and the
// state-comparison metrics used to read out the result.

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "lvn/observables.hpp"
#include "lvn/quantum_register.hpp"

namespace lvn {

/// The device as the protocol sees it: states in, states out.
using Channel = std::function<DensityMatrix(const DensityMatrix&)>;

/// LuedersConsistent rather than "Lueders": an unchanged state can never
/// exclude a von Neumann device whose refining basis happens to contain every
/// probe, nor one whose refinement changes over time.
enum class Verdict { LuedersConsistent, VonNeumann, Intermediate, Inconclusive };

std::string_view to_string(Verdict verdict);

struct Evidence {
  std::size_t block;  // index into A.degeneracy_partition()
  CKet input;
  DensityMatrix output;
  double fidelity;
};

struct Classification {
  Verdict verdict;
  std::vector<Evidence> evidence;
  std::optional<std::vector<CKet>> recovered_basis;  // von Neumann only
};

inline constexpr double kDefaultProtocolTol = 1e-6;

/// For every degenerate block of A: probe with the block's eigenkets plus
/// n_states seeded random superpositions inside the block, and classify the
/// device from the input-output fidelities.
Classification hm_discriminate(const Channel& device, const Observable& A, int n_states,
                               double tol = kDefaultProtocolTol, std::uint64_t seed = 0);

/// Same classification for a caller-chosen set of probes. Each probe must be
/// an eigenstate of A inside a degenerate block.
Classification hm_discriminate_states(const Channel& device, const Observable& A,
                                      const std::vector<CKet>& probes,
                                      double tol = kDefaultProtocolTol);

/// Tr sqrt(sqrt(sigma) rho sqrt(sigma))
double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Tr[a b] / sqrt(Tr[a^2] Tr[b^2]). Throws NullMatrix when either operand
/// has Frobenius norm <= 1e-12.
double correlation(const CMatrix& a, const CMatrix& b);
double correlation(const DeviationMatrix& a, const DeviationMatrix& b);

struct BaselineReport {
  std::size_t sample_count = 0;
  double max_correlation = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
};

/// Correlation of `target` with random traceless diagonal matrices (standard
/// normal entries, mean removed, Frobenius-normalised).
BaselineReport null_baseline(const DeviationMatrix& target, std::size_t n_samples,
                             std::uint64_t seed);

/// Largest correlation any traceless diagonal matrix can reach with
/// `target`: the norm of its projection onto that subspace over its norm.
double diagonal_projection_bound(const CMatrix& target);

}  // namespace lvn
