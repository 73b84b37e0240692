#pragma once

// Measurement devices as projective state-update channels, and the
// ancilla-coupled circuit that realises them on the 4-qubit register.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lvn/observables.hpp"
#include "lvn/quantum_register.hpp"

namespace lvn {

enum class DeviceKind { Lueders, VonNeumann, Intermediate };

std::string_view to_string(DeviceKind kind);
DeviceKind parse_device_kind(std::string_view name);

/// A projective partition of the 4-dim system space with one outcome value
/// per element. The elements sharing an outcome must add up to a rank-2
/// projector; those two rank-2 blocks form the coarse (Lueders) partition
/// that every device refines.
class MeasurementDevice {
 public:
  MeasurementDevice(DeviceKind kind, std::vector<CMatrix> partition, std::vector<double> outcomes,
                    std::optional<EigenBasis> refining_basis = std::nullopt);

  DeviceKind kind() const { return kind_; }
  const std::vector<CMatrix>& partition() const { return partition_; }
  const std::vector<double>& outcomes() const { return outcomes_; }
  const std::optional<EigenBasis>& refining_basis() const { return refining_basis_; }

  /// Outcome values in descending order, i.e. {+1, -1} for the default A.
  std::vector<double> outcome_values() const;

  /// Sum of the elements with the given outcome.
  CMatrix coarse_projector(double outcome) const;

  /// Rank of a partition element.
  int rank(std::size_t element) const;

 private:
  DeviceKind kind_;
  std::vector<CMatrix> partition_;
  std::vector<double> outcomes_;
  std::optional<EigenBasis> refining_basis_;
};

/// {Pi_0 + Pi_1, Pi_2 + Pi_3} with outcomes {+1, -1}.
MeasurementDevice lueders_device(const EigenBasis& basis = EigenBasis::computational());

/// Rank-1 projectors Pi_j, relabelled through the refining map: outcome_j = f(a'_j).
MeasurementDevice von_neumann_device(const EigenBasis& basis, const Quad& a_prime,
                                     const RefiningMap& f);
MeasurementDevice von_neumann_device(const EigenBasis& basis = EigenBasis::computational());

/// Groups of eigenbasis indices, e.g. {{0}, {1}, {2, 3}}. Each group must
/// stay inside one degenerate block of A. The kind follows from the group
/// sizes.
MeasurementDevice device_from_groups(const EigenBasis& basis,
                                     const std::vector<std::vector<int>>& groups);

/// Lueders {{0,1},{2,3}}, von Neumann {{0},{1},{2},{3}}, intermediate {{0},{1},{2,3}}.
MeasurementDevice default_device(DeviceKind kind,
                                 const EigenBasis& basis = EigenBasis::computational());

/// rho -> sum_k P_k rho P_k over the device partition.
template <RegisterState S>
S apply_device(const MeasurementDevice& device, const S& rho) {
  if (rho.dim() != kSystemDim) throw DimensionMismatch("apply_device: expected a 4-dim system state");
  CMatrix out = CMatrix::Zero(kSystemDim, kSystemDim);
  for (const auto& p : device.partition()) out += p * rho.matrix() * p;
  return S(std::move(out));
}

/// p(a) = sum over elements labelled a of Tr(P rho P).
std::map<double, double> outcome_probabilities(const MeasurementDevice& device,
                                               const DensityMatrix& rho);

/// (1 - p) rho + p Tr(rho) I / dim
template <RegisterState S>
S depolarize(const S& rho, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw BadProbability("depolarize: p must lie in [0, 1]");
  const Index d = rho.dim();
  return S((1.0 - p) * rho.matrix() + p * rho.matrix().trace() * CMatrix::Identity(d, d) / double(d));
}

/// exp(-i g (Q (x) A) tau) for Lueders, exp(-i g (Q (x) A') tau) for von Neumann.
CMatrix build_joint_unitary(DeviceKind kind, const PointerConfig& config, const Observable& A,
                            const Observable& Aprime);

/// The system operator the device couples to the ancilla. Rank-1 elements
/// carry the a' value of their slot (slots 0,1 for the first outcome block,
/// 2,3 for the second); a whole block carries the a' value of its last slot,
/// which is its outcome value (+1 or -1) in the default configuration.
CMatrix interaction_observable(const MeasurementDevice& device, const PointerConfig& config);

CMatrix build_joint_unitary(const MeasurementDevice& device, const PointerConfig& config);

template <RegisterState S>
struct CircuitResult {
  S system_state;
  std::optional<std::array<double, 4>> ancilla_distribution;  // density inputs only
  CMatrix joint_post_state;  // after U_a^dagger and ancilla dephasing
};

/// Joint evolution, U_a^dagger on the ancilla, ancilla dephasing, then the
/// ancilla is traced out.
CircuitResult<DensityMatrix> run_circuit(const MeasurementDevice& device,
                                         const PointerConfig& config, const DensityMatrix& input);
CircuitResult<DeviationMatrix> run_circuit(const MeasurementDevice& device,
                                           const PointerConfig& config,
                                           const DeviationMatrix& input);
CircuitResult<DensityMatrix> run_circuit(const MeasurementDevice& device,
                                         const PointerConfig& config, const CKet& input);

template <typename Input>
auto run_circuit(DeviceKind kind, const PointerConfig& config, const Input& input) {
  return run_circuit(default_device(kind), config, input);
}

}  // namespace lvn
