#include "lvn/devices.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lvn {

std::string_view to_string(DeviceKind kind) {
  switch (kind) {
    case DeviceKind::Lueders: return "lueders";
    case DeviceKind::VonNeumann: return "vonneumann";
    case DeviceKind::Intermediate: return "intermediate";
  }
  return "unknown";
}

DeviceKind parse_device_kind(std::string_view name) {
  if (name == "lueders") return DeviceKind::Lueders;
  if (name == "vonneumann") return DeviceKind::VonNeumann;
  if (name == "intermediate") return DeviceKind::Intermediate;
  throw Error("unknown device kind '" + std::string(name) + "'");
}

MeasurementDevice::MeasurementDevice(DeviceKind kind, std::vector<CMatrix> partition,
                                     std::vector<double> outcomes,
                                     std::optional<EigenBasis> refining_basis)
    : kind_(kind),
      partition_(std::move(partition)),
      outcomes_(std::move(outcomes)),
      refining_basis_(std::move(refining_basis)) {
  if (partition_.empty() || partition_.front().rows() != kSystemDim)
    throw DimensionMismatch("MeasurementDevice: partition must act on the 4-dim system");
  // validates orthogonality and completeness
  const Observable check(outcomes_, partition_);

  const auto values = outcome_values();
  if (values.size() != 2)
    throw InvalidPartition("MeasurementDevice: expected exactly two outcome values");
  for (double v : values) {
    const double r = coarse_projector(v).trace().real();
    if (std::abs(r - 2.0) > 1e-9)
      throw InvalidPartition("MeasurementDevice: each outcome must cover a rank-2 block");
  }

  std::size_t rank1 = 0;
  for (std::size_t k = 0; k < partition_.size(); ++k) rank1 += rank(k) == 1;
  const bool ok = (kind_ == DeviceKind::Lueders && rank1 == 0 && partition_.size() == 2) ||
                  (kind_ == DeviceKind::VonNeumann && rank1 == 4) ||
                  (kind_ == DeviceKind::Intermediate && rank1 == 2 && partition_.size() == 3);
  if (!ok) throw InvalidPartition("MeasurementDevice: partition ranks do not match the device kind");
  if (refining_basis_ && kind_ != DeviceKind::VonNeumann)
    throw InvalidPartition("MeasurementDevice: only von Neumann devices carry a refining basis");
}

std::vector<double> MeasurementDevice::outcome_values() const {
  std::vector<double> values;
  for (double o : outcomes_)
    if (std::none_of(values.begin(), values.end(), [&](double v) { return std::abs(v - o) <= 1e-9; }))
      values.push_back(o);
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

CMatrix MeasurementDevice::coarse_projector(double outcome) const {
  CMatrix out = CMatrix::Zero(kSystemDim, kSystemDim);
  for (std::size_t k = 0; k < partition_.size(); ++k)
    if (std::abs(outcomes_[k] - outcome) <= 1e-9) out += partition_[k];
  return out;
}

int MeasurementDevice::rank(std::size_t element) const {
  return int(std::lround(partition_.at(element).trace().real()));
}

MeasurementDevice lueders_device(const EigenBasis& basis) {
  return MeasurementDevice(DeviceKind::Lueders,
                           {CMatrix(basis.projector(0) + basis.projector(1)),
                            CMatrix(basis.projector(2) + basis.projector(3))},
                           {1.0, -1.0});
}

MeasurementDevice von_neumann_device(const EigenBasis& basis, const Quad& a_prime,
                                     const RefiningMap& f) {
  std::vector<double> outcomes;
  std::vector<CMatrix> partition;
  const Quad expected{1.0, 1.0, -1.0, -1.0};
  for (int j = 0; j < 4; ++j) {
    const double label = f(a_prime[j]);
    if (std::abs(label - expected[j]) > 1e-9)
      throw InvalidPartition("von_neumann_device: refining map does not reproduce the spectrum of A");
    outcomes.push_back(expected[j]);
    partition.push_back(basis.projector(j));
  }
  return MeasurementDevice(DeviceKind::VonNeumann, std::move(partition), std::move(outcomes), basis);
}

MeasurementDevice von_neumann_device(const EigenBasis& basis) {
  const Quad a_prime{-3.0, 1.0, 3.0, -1.0};
  return von_neumann_device(basis, a_prime, fit_refining_map(a_prime, {1.0, 1.0, -1.0, -1.0}));
}

MeasurementDevice device_from_groups(const EigenBasis& basis,
                                     const std::vector<std::vector<int>>& groups) {
  std::set<int> seen;
  std::vector<CMatrix> partition;
  std::vector<double> outcomes;
  std::size_t singles = 0;
  for (const auto& group : groups) {
    if (group.empty()) throw InvalidPartition("device_from_groups: empty group");
    CMatrix p = CMatrix::Zero(kSystemDim, kSystemDim);
    for (int j : group) {
      if (j < 0 || j > 3 || !seen.insert(j).second)
        throw InvalidPartition("device_from_groups: indices must cover 0..3 exactly once");
      if ((j < 2) != (group.front() < 2))
        throw InvalidPartition("device_from_groups: a group may not straddle the two blocks of A");
      p += basis.projector(j);
    }
    singles += group.size() == 1;
    partition.push_back(std::move(p));
    outcomes.push_back(group.front() < 2 ? 1.0 : -1.0);
  }
  if (seen.size() != 4) throw InvalidPartition("device_from_groups: indices must cover 0..3");

  // keep elements in block order so interaction slots line up with a'
  std::vector<std::size_t> order(partition.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return *std::min_element(groups[x].begin(), groups[x].end()) <
           *std::min_element(groups[y].begin(), groups[y].end());
  });
  std::vector<CMatrix> sorted_partition;
  std::vector<double> sorted_outcomes;
  for (std::size_t i : order) {
    sorted_partition.push_back(partition[i]);
    sorted_outcomes.push_back(outcomes[i]);
  }

  if (singles == 4)
    return MeasurementDevice(DeviceKind::VonNeumann, std::move(sorted_partition),
                             std::move(sorted_outcomes), basis);
  const DeviceKind kind = singles == 0 ? DeviceKind::Lueders : DeviceKind::Intermediate;
  return MeasurementDevice(kind, std::move(sorted_partition), std::move(sorted_outcomes));
}

MeasurementDevice default_device(DeviceKind kind, const EigenBasis& basis) {
  switch (kind) {
    case DeviceKind::Lueders: return device_from_groups(basis, {{0, 1}, {2, 3}});
    case DeviceKind::VonNeumann: return device_from_groups(basis, {{0}, {1}, {2}, {3}});
    case DeviceKind::Intermediate: return device_from_groups(basis, {{0}, {1}, {2, 3}});
  }
  throw Error("default_device: unknown kind");
}

std::map<double, double> outcome_probabilities(const MeasurementDevice& device,
                                               const DensityMatrix& rho) {
  if (rho.dim() != kSystemDim)
    throw DimensionMismatch("outcome_probabilities: expected a 4-dim system state");
  std::map<double, double> out;
  for (double v : device.outcome_values()) out[v] = 0.0;
  for (std::size_t k = 0; k < device.partition().size(); ++k) {
    const CMatrix& p = device.partition()[k];
    const double prob = (p * rho.matrix() * p).trace().real();
    for (auto& [value, total] : out)
      if (std::abs(value - device.outcomes()[k]) <= 1e-9) total += prob;
  }
  return out;
}

CMatrix build_joint_unitary(DeviceKind kind, const PointerConfig& config, const Observable& A,
                            const Observable& Aprime) {
  if (kind == DeviceKind::Intermediate)
    throw Error("build_joint_unitary: intermediate devices need an explicit partition");
  const CMatrix& system = kind == DeviceKind::Lueders ? A.matrix() : Aprime.matrix();
  const CMatrix h = config.g * kron(build_Q(config.q1, config.q2).matrix(), system);
  return matexp_hermitian(h, config.tau);
}

CMatrix interaction_observable(const MeasurementDevice& device, const PointerConfig& config) {
  const auto values = device.outcome_values();
  std::array<int, 2> used{0, 0};
  CMatrix out = CMatrix::Zero(kSystemDim, kSystemDim);
  for (std::size_t k = 0; k < device.partition().size(); ++k) {
    const int block = std::abs(device.outcomes()[k] - values[0]) <= 1e-9 ? 0 : 1;
    const int slot = device.rank(k) == 1 ? 2 * block + used[block]++ : 2 * block + 1;
    const double weight = config.a_prime[slot];
    out += weight * device.partition()[k];
  }
  return out;
}

CMatrix build_joint_unitary(const MeasurementDevice& device, const PointerConfig& config) {
  const CMatrix h =
      config.g * kron(build_Q(config.q1, config.q2).matrix(), interaction_observable(device, config));
  return matexp_hermitian(h, config.tau);
}

namespace {

struct Pipeline {
  CMatrix joint;
  CMatrix system;
  std::array<double, 4> distribution;
};

Pipeline run_pipeline(const MeasurementDevice& device, const PointerConfig& config,
                      const CMatrix& input) {
  if (input.rows() != kRegisterDim || input.cols() != kRegisterDim)
    throw DimensionMismatch("run_circuit: expected a 16-dim register state");
  const CMatrix u = build_joint_unitary(device, config);
  const CMatrix w = kron(CMatrix(config.Ua.adjoint()), CMatrix(CMatrix::Identity(kSystemDim, kSystemDim)));
  const CMatrix rotated = w * u * input * u.adjoint() * w.adjoint();
  Pipeline out;
  out.joint = dephase_ancilla(rotated);
  for (Index a = 0; a < kAncillaDim; ++a)
    out.distribution[a] =
        out.joint.block(a * kSystemDim, a * kSystemDim, kSystemDim, kSystemDim).trace().real();
  out.system = partial_trace(out.joint, kAncillaDim, kSystemDim, Keep::B);
  // Hermitian to roundoff; restore exact symmetry before validation
  out.system = (out.system + out.system.adjoint()) / 2.0;
  return out;
}

}  // namespace

CircuitResult<DensityMatrix> run_circuit(const MeasurementDevice& device,
                                         const PointerConfig& config, const DensityMatrix& input) {
  auto p = run_pipeline(device, config, input.matrix());
  return {DensityMatrix(std::move(p.system)), p.distribution, std::move(p.joint)};
}

CircuitResult<DeviationMatrix> run_circuit(const MeasurementDevice& device,
                                           const PointerConfig& config,
                                           const DeviationMatrix& input) {
  auto p = run_pipeline(device, config, input.matrix());
  return {DeviationMatrix(std::move(p.system)), std::nullopt, std::move(p.joint)};
}

CircuitResult<DensityMatrix> run_circuit(const MeasurementDevice& device,
                                         const PointerConfig& config, const CKet& input) {
  return run_circuit(device, config, DensityMatrix::pure(input));
}

}  // namespace lvn
