#pragma once

// Experiment configuration for the command-line front end.
//
// The on-disk form is JSON. Every field is optional; defaults reproduce the
// worked 2+2 qubit example (g = tau = 1, a' = (-3, 1, 3, -1), q1 = pi/4,
// q2 = -q1/2, computational refining basis). `to_json` writes the fully
// resolved configuration so that a report's echo can be fed back verbatim.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lvn/app/canonical_json.hpp"
#include "lvn/devices.hpp"
#include "lvn/observables.hpp"

namespace lvn::app {

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class PointerMode { Default, Solve, Explicit };

struct PointerSpec {
  PointerMode mode = PointerMode::Default;
  double q1 = 0.0;  // Explicit only
  double q2 = 0.0;
  Quad a_prime{};
};

struct DeviceSpec {
  DeviceKind kind = DeviceKind::Lueders;
  std::vector<std::vector<int>> groups;       // empty -> default partition for kind
  std::array<double, 4> basis_angles{0, 0, 0, 0};  // theta/phase upper, theta/phase lower
};

/// A state reference: a named pipeline output or an explicit matrix.
struct StateSpec {
  StateSpec(std::string n = {}, bool dev = false, CMatrix m = {})
      : name(std::move(n)), deviation(dev), matrix(std::move(m)) {}

  std::string name;            // "plus_register", "pops", "lueders_plus", ... or "explicit"
  bool deviation = false;      // explicit only
  CMatrix matrix;              // explicit only
};

struct ProtocolSpec {
  int n_states = 3;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::vector<CKet> probes;    // when non-empty, replaces the random probes
};

struct BaselineSpec {
  std::uint64_t n_samples = 100000;
  std::uint64_t seed = 0;
};

struct MetricsSpec {
  std::array<StateSpec, 2> fidelity{StateSpec{"lueders_plus"}, StateSpec{"vonneumann_plus"}};
  std::array<StateSpec, 2> correlation{StateSpec{"lueders_pops"}, StateSpec{"lueders_pops"}};
  StateSpec baseline_target{"lueders_pops"};
};

struct ExperimentConfig {
  double g = 1.0;
  double tau = 1.0;
  PointerSpec pointer;
  SearchSpace search;
  DeviceSpec device;
  StateSpec input{"plus_register"};
  std::optional<double> noise;  // depolarizing probability
  ProtocolSpec protocol;
  BaselineSpec baseline;
  MetricsSpec metrics;
};

ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path);
Json to_json(const ExperimentConfig& config);

EigenBasis resolve_basis(const DeviceSpec& spec);
MeasurementDevice resolve_device(const DeviceSpec& spec);

}  // namespace lvn::app
