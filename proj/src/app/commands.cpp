#include "lvn/app/commands.hpp"

#include <cstdio>
#include <sstream>
#include <variant>

#include "lvn/protocol.hpp"

namespace lvn::app {

namespace {

using AnyState = std::variant<DensityMatrix, DeviationMatrix>;

std::string number_key(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

PointerConfig resolve_pointer(const ExperimentConfig& c) {
  switch (c.pointer.mode) {
    case PointerMode::Default: return default_pointer_config(c.g, c.tau);
    case PointerMode::Explicit:
      return make_pointer_config(c.g, c.tau, c.pointer.q1, c.pointer.q2, c.pointer.a_prime);
    case PointerMode::Solve: {
      auto solutions = solve_pointer_config(c.g, c.tau, c.search);
      for (auto& s : solutions)
        if (is_default_solution(s)) return s;
      return solutions.front();
    }
  }
  throw ConfigError("pointer: unknown mode");
}

Json pointer_json(const PointerConfig& p) {
  Json out;
  out["g"] = p.g;
  out["tau"] = p.tau;
  out["q1"] = p.q1;
  out["q2"] = p.q2;
  out["a_prime"] = p.a_prime;
  out["is_default_solution"] = is_default_solution(p);
  out["pointer_states"] = Json::array();
  for (const auto& k : p.pointer_states) out["pointer_states"].push_back(ket_to_json(k));
  out["ua"] = matrix_to_json(p.Ua);
  return out;
}

Json device_json(const MeasurementDevice& d) {
  Json out;
  out["kind"] = std::string(to_string(d.kind()));
  out["outcomes"] = d.outcomes();
  out["partition"] = Json::array();
  for (const auto& p : d.partition()) out["partition"].push_back(matrix_to_json(p));
  return out;
}

template <RegisterState S>
S with_noise(const ExperimentConfig& c, const S& rho) {
  return c.noise ? depolarize(rho, *c.noise) : rho;
}

const CMatrix& plus_plus() {
  static const CMatrix m = outer(plus_register(2));
  return m;
}

// Register-sized input for the circuit; 4x4 inputs get a |++> ancilla.
AnyState register_input(const StateSpec& s) {
  if (s.name == "plus_register") return DensityMatrix::pure(plus_register(4));
  if (s.name == "pops") return pops_deviation();
  if (s.name != "explicit") throw ConfigError("input: '" + s.name + "' is not a register input");
  CMatrix m = s.matrix;
  if (m.rows() == kSystemDim && m.cols() == kSystemDim) m = kron(plus_plus(), m);
  if (m.rows() != kRegisterDim || m.cols() != kRegisterDim)
    throw ConfigError("input: explicit matrices must be 4x4 (system) or 16x16 (register)");
  if (s.deviation) return DeviationMatrix(std::move(m));
  return DensityMatrix(std::move(m));
}

// System part of a product input with a |++> ancilla, if it is one.
std::optional<CMatrix> system_part(const CMatrix& reg) {
  const CMatrix sys = partial_trace(reg, kAncillaDim, kSystemDim, Keep::B);
  if (max_abs(CMatrix(kron(plus_plus(), sys) - reg)) > 1e-12) return std::nullopt;
  return sys;
}

AnyState circuit_output(const MeasurementDevice& device, const PointerConfig& pointer,
                        const ExperimentConfig& c, const AnyState& input) {
  return std::visit(
      [&](const auto& in) -> AnyState { return with_noise(c, run_circuit(device, pointer, in).system_state); },
      input);
}

// A 4x4 system state from a metric reference.
AnyState system_state(const StateSpec& s, const ExperimentConfig& c, const PointerConfig& pointer) {
  if (s.name == "explicit") {
    if (s.matrix.rows() != kSystemDim || s.matrix.cols() != kSystemDim)
      throw ConfigError("metrics: explicit states must be 4x4 system matrices");
    if (s.deviation) return DeviationMatrix(s.matrix);
    return DensityMatrix(s.matrix);
  }
  if (s.name == "plus_register") return DensityMatrix::pure(plus_register(2));
  if (s.name == "pops")
    return DeviationMatrix(partial_trace(pops_deviation().matrix(), kAncillaDim, kSystemDim, Keep::B));
  const auto split = s.name.find('_');
  DeviceSpec spec = c.device;
  spec.kind = parse_device_kind(s.name.substr(0, split));
  if (spec.kind != c.device.kind) spec.groups.clear();
  const MeasurementDevice device = resolve_device(spec);
  const std::string source = s.name.substr(split + 1);
  const AnyState input = source == "plus" ? AnyState(DensityMatrix::pure(plus_register(4)))
                                          : AnyState(pops_deviation());
  return circuit_output(device, pointer, c, input);
}

const CMatrix& matrix_of(const AnyState& s) {
  return std::visit([](const auto& x) -> const CMatrix& { return x.matrix(); }, s);
}

std::string state_label(const StateSpec& s) { return s.name; }

Json base_report(const std::string& command, const ExperimentConfig& c) {
  Json out;
  out["command"] = command;
  out["config"] = to_json(c);
  return out;
}

template <typename Body>
CommandResult guarded(const std::string& command, const ExperimentConfig& c, Body&& body) {
  CommandResult result{kOk, base_report(command, c)};
  const auto fail = [&](int code, const char* type, const char* what) {
    result.exit_code = code;
    result.report["error"] = {{"type", type}, {"message", what}};
  };
  try {
    body(result.report);
  } catch (const NoSolution& e) {
    fail(kNoSolution, "NoSolution", e.what());
  } catch (const NullMatrix& e) {
    fail(kMetricUndefined, "NullMatrix", e.what());
  } catch (const ConfigError& e) {
    fail(kConfigError, "ConfigError", e.what());
  } catch (const Error& e) {
    fail(kConfigError, "InvalidInput", e.what());
  }
  return result;
}

}  // namespace

CommandResult cmd_solve_pointer(const ExperimentConfig& c) {
  return guarded("solve-pointer", c, [&](Json& report) {
    const auto solutions = solve_pointer_config(c.g, c.tau, c.search);
    Json results;
    results["count"] = solutions.size();
    results["default_solution_found"] = false;
    results["default_solution_index"] = nullptr;
    Json list = Json::array();
    for (std::size_t i = 0; i < solutions.size(); ++i) {
      const auto& s = solutions[i];
      const bool flagged = is_default_solution(s);
      if (flagged) {
        results["default_solution_found"] = true;
        results["default_solution_index"] = i;
        report["pointer"] = pointer_json(s);
      }
      list.push_back({{"a_prime", s.a_prime}, {"q1", s.q1}, {"q2", s.q2}, {"is_default_solution", flagged}});
    }
    if (!report.contains("pointer")) report["pointer"] = pointer_json(solutions.front());
    results["solutions"] = std::move(list);
    report["results"] = std::move(results);
  });
}

CommandResult cmd_simulate(const ExperimentConfig& c) {
  return guarded("simulate", c, [&](Json& report) {
    const PointerConfig pointer = resolve_pointer(c);
    const MeasurementDevice device = resolve_device(c.device);
    const AnyState input = register_input(c.input);
    report["pointer"] = pointer_json(pointer);

    Json results;
    results["device"] = device_json(device);
    const bool deviation = std::holds_alternative<DeviationMatrix>(input);
    results["state_type"] = deviation ? "deviation" : "density";

    std::optional<std::array<double, 4>> distribution;
    CMatrix output;
    if (deviation) {
      output = with_noise(c, run_circuit(device, pointer, std::get<DeviationMatrix>(input)).system_state).matrix();
    } else {
      const auto r = run_circuit(device, pointer, std::get<DensityMatrix>(input));
      output = with_noise(c, r.system_state).matrix();
      distribution = r.ancilla_distribution;
    }
    results["system_state"] = matrix_to_json(output);
    results["ancilla_distribution"] = distribution ? Json(*distribution) : Json(nullptr);

    const auto sys = system_part(matrix_of(input));
    results["outcome_probabilities"] = nullptr;
    results["channel_reference"] = nullptr;
    results["channel_max_abs_difference"] = nullptr;
    if (sys) {
      const CMatrix reference =
          deviation ? with_noise(c, apply_device(device, DeviationMatrix(*sys))).matrix()
                    : with_noise(c, apply_device(device, DensityMatrix(*sys))).matrix();
      results["channel_reference"] = matrix_to_json(reference);
      results["channel_max_abs_difference"] = max_abs(CMatrix(reference - output));
      if (!deviation) {
        Json probs;
        for (const auto& [value, p] : outcome_probabilities(device, DensityMatrix(*sys)))
          probs[number_key(value)] = p;
        results["outcome_probabilities"] = std::move(probs);
      }
    }
    report["results"] = std::move(results);
  });
}

CommandResult cmd_discriminate(const ExperimentConfig& c) {
  return guarded("discriminate", c, [&](Json& report) {
    const MeasurementDevice device = resolve_device(c.device);
    const Observable A = build_A(resolve_basis(c.device));
    const Channel channel = [&](const DensityMatrix& rho) {
      return with_noise(c, apply_device(device, rho));
    };
    const Classification cls =
        c.protocol.probes.empty()
            ? hm_discriminate(channel, A, c.protocol.n_states, c.protocol.tol, c.protocol.seed)
            : hm_discriminate_states(channel, A, c.protocol.probes, c.protocol.tol);

    Json results;
    results["device"] = device_json(device);
    results["verdict"] = std::string(to_string(cls.verdict));
    results["evidence"] = Json::array();
    for (const auto& e : cls.evidence) {
      Json row;
      row["block_value"] = A.degeneracy_partition()[e.block].value;
      row["input"] = ket_to_json(e.input);
      row["fidelity"] = e.fidelity;
      row["output"] = matrix_to_json(e.output.matrix());
      results["evidence"].push_back(std::move(row));
    }
    results["recovered_basis"] = nullptr;
    if (cls.recovered_basis) {
      Json basis = Json::array();
      for (const auto& k : *cls.recovered_basis) basis.push_back(ket_to_json(k));
      results["recovered_basis"] = std::move(basis);
    }
    report["results"] = std::move(results);
  });
}

CommandResult cmd_report_metrics(const ExperimentConfig& c) {
  return guarded("report-metrics", c, [&](Json& report) {
    const PointerConfig pointer = resolve_pointer(c);
    report["pointer"] = pointer_json(pointer);
    report["results"] = Json::object();
    Json& results = report["results"];

    const auto density = [&](const StateSpec& s) {
      const AnyState st = system_state(s, c, pointer);
      if (!std::holds_alternative<DensityMatrix>(st))
        throw ConfigError("metrics.fidelity: '" + s.name + "' is not a density matrix");
      return std::get<DensityMatrix>(st);
    };
    const auto deviation = [&](const StateSpec& s) {
      const AnyState st = system_state(s, c, pointer);
      if (!std::holds_alternative<DeviationMatrix>(st))
        throw ConfigError("metrics: '" + s.name + "' is not a deviation matrix");
      return std::get<DeviationMatrix>(st);
    };

    const auto& fp = c.metrics.fidelity;
    results["fidelity"] = {{"states", Json::array({state_label(fp[0]), state_label(fp[1])})},
                           {"value", uhlmann_fidelity(density(fp[0]), density(fp[1]))}};

    const auto& cp = c.metrics.correlation;
    results["correlation"] = {{"states", Json::array({state_label(cp[0]), state_label(cp[1])})},
                              {"value", nullptr}};
    results["correlation"]["value"] = correlation(deviation(cp[0]), deviation(cp[1]));

    const DeviationMatrix target = deviation(c.metrics.baseline_target);
    const BaselineReport b = null_baseline(target, c.baseline.n_samples, c.baseline.seed);
    Json baseline;
    baseline["target"] = state_label(c.metrics.baseline_target);
    baseline["sample_count"] = b.sample_count;
    baseline["max_correlation"] = b.max_correlation;
    baseline["mean"] = b.mean;
    baseline["stddev"] = b.stddev;
    baseline["diagonal_projection_bound"] = diagonal_projection_bound(target.matrix());
    results["baseline"] = std::move(baseline);
  });
}

CommandResult run_command(const std::string& name, const ExperimentConfig& config) {
  if (name == "solve-pointer") return cmd_solve_pointer(config);
  if (name == "simulate") return cmd_simulate(config);
  if (name == "discriminate") return cmd_discriminate(config);
  if (name == "report-metrics") return cmd_report_metrics(config);
  throw ConfigError("unknown command '" + name + "'");
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void print_matrix(std::ostringstream& os, const Json& m) {
  for (const auto& row : m) {
    os << "   ";
    for (const auto& e : row) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " %+.4f%+.4fi", e[0].get<double>(), e[1].get<double>());
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace

std::string render_human(const Json& report) {
  std::ostringstream os;
  os << "command: " << report.value("command", "?") << '\n';
  if (report.contains("pointer")) {
    const Json& p = report["pointer"];
    os << "pointer: a' = " << p["a_prime"].dump() << ", q1 = " << fmt(p["q1"].get<double>())
       << ", q2 = " << fmt(p["q2"].get<double>())
       << (p["is_default_solution"].get<bool>() ? "  [default solution]" : "") << '\n';
  }
  if (report.contains("error")) {
    os << "error (" << report["error"]["type"].get<std::string>()
       << "): " << report["error"]["message"].get<std::string>() << '\n';
  }
  if (!report.contains("results")) return os.str();
  const Json& r = report["results"];
  const std::string command = report.value("command", "");
  if (command == "solve-pointer") {
    os << "solutions: " << r["count"].get<std::size_t>() << '\n';
    os << "default solution found: " << (r["default_solution_found"].get<bool>() ? "yes" : "no") << '\n';
  } else if (command == "simulate") {
    os << "device: " << r["device"]["kind"].get<std::string>() << '\n';
    os << r["state_type"].get<std::string>() << " output (system):\n";
    print_matrix(os, r["system_state"]);
    if (!r["ancilla_distribution"].is_null()) os << "ancilla distribution: " << r["ancilla_distribution"].dump() << '\n';
    if (!r["outcome_probabilities"].is_null()) os << "outcome probabilities: " << r["outcome_probabilities"].dump() << '\n';
    if (!r["channel_max_abs_difference"].is_null())
      os << "circuit vs channel max |diff|: " << fmt(r["channel_max_abs_difference"].get<double>()) << '\n';
  } else if (command == "discriminate") {
    os << "device: " << r["device"]["kind"].get<std::string>() << '\n';
    os << "verdict: " << r["verdict"].get<std::string>() << '\n';
    os << "  block  fidelity\n";
    for (const auto& e : r["evidence"])
      os << "  " << fmt(e["block_value"].get<double>()) << "     " << fmt(e["fidelity"].get<double>()) << '\n';
    if (!r["recovered_basis"].is_null()) os << "recovered basis: " << r["recovered_basis"].dump() << '\n';
  } else if (command == "report-metrics") {
    if (r.contains("fidelity")) os << "fidelity: " << fmt(r["fidelity"]["value"].get<double>()) << '\n';
    if (r.contains("correlation") && !r["correlation"]["value"].is_null())
      os << "correlation: " << fmt(r["correlation"]["value"].get<double>()) << '\n';
    if (r.contains("baseline"))
      os << "null baseline max correlation: " << fmt(r["baseline"]["max_correlation"].get<double>())
         << " over " << r["baseline"]["sample_count"].get<std::size_t>() << " samples\n";
  }
  return os.str();
}

}  // namespace lvn::app
