#include "lvn/app/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace lvn::app {

namespace {

void only_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + ": must be finite");
  return v;
}

std::uint64_t count(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<long long>() < 0))
    throw ConfigError(where + ": expected a non-negative integer");
  return j.get<std::uint64_t>();
}

Quad quad(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) throw ConfigError(where + ": expected 4 numbers");
  Quad out{};
  for (std::size_t i = 0; i < 4; ++i) out[i] = number(j[i], where);
  return out;
}

StateSpec parse_state(const Json& j, const std::string& where) {
  static const std::set<std::string> names{
      "plus_register",    "pops",           "lueders_plus",       "vonneumann_plus",
      "intermediate_plus", "lueders_pops",  "vonneumann_pops",    "intermediate_pops"};
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (!names.count(name)) throw ConfigError(where + ": unknown state '" + name + "'");
    return {name};
  }
  if (j.is_object() && j.size() == 1 && (j.contains("density") || j.contains("deviation"))) {
    const bool dev = j.contains("deviation");
    return {"explicit", dev, matrix_from_json(j.at(dev ? "deviation" : "density"))};
  }
  throw ConfigError(where + ": expected a state name or {\"density\"|\"deviation\": matrix}");
}

Json state_to_json(const StateSpec& s) {
  if (s.name != "explicit") return s.name;
  Json out = Json::object();
  out[s.deviation ? "deviation" : "density"] = matrix_to_json(s.matrix);
  return out;
}

}  // namespace

ExperimentConfig parse_config(const Json& j) {
  only_keys(j, {"g", "tau", "pointer", "search", "device", "input", "noise", "protocol", "baseline",
                "metrics"},
            "config");
  ExperimentConfig c;
  if (j.contains("g")) c.g = number(j["g"], "g");
  if (j.contains("tau")) c.tau = number(j["tau"], "tau");
  if (!(c.g > 0.0) || !(c.tau > 0.0)) throw ConfigError("g and tau must be positive");

  if (j.contains("pointer")) {
    const Json& p = j["pointer"];
    if (p == "default") {
      c.pointer.mode = PointerMode::Default;
    } else if (p == "solve") {
      c.pointer.mode = PointerMode::Solve;
    } else {
      only_keys(p, {"q1", "q2", "a_prime"}, "pointer");
      if (!p.contains("q1") || !p.contains("q2") || !p.contains("a_prime"))
        throw ConfigError("pointer: explicit form needs q1, q2 and a_prime");
      c.pointer = {PointerMode::Explicit, number(p["q1"], "pointer.q1"), number(p["q2"], "pointer.q2"),
                   quad(p["a_prime"], "pointer.a_prime")};
    }
  }

  if (j.contains("search")) {
    const Json& s = j["search"];
    only_keys(s, {"max_abs_eigenvalue", "q1_steps", "q1_values", "q2_ratios", "a_prime_candidates"},
              "search");
    if (s.contains("max_abs_eigenvalue"))
      c.search.max_abs_eigenvalue = int(count(s["max_abs_eigenvalue"], "search.max_abs_eigenvalue"));
    if (s.contains("q1_steps")) c.search.q1_steps = int(count(s["q1_steps"], "search.q1_steps"));
    if (s.contains("q1_values")) {
      if (!s["q1_values"].is_array()) throw ConfigError("search.q1_values: expected an array");
      c.search.q1_values.clear();
      for (const auto& v : s["q1_values"]) c.search.q1_values.push_back(number(v, "search.q1_values"));
    }
    if (s.contains("q2_ratios")) {
      if (!s["q2_ratios"].is_array()) throw ConfigError("search.q2_ratios: expected an array");
      c.search.q2_ratios.clear();
      for (const auto& v : s["q2_ratios"]) c.search.q2_ratios.push_back(number(v, "search.q2_ratios"));
    }
    if (s.contains("a_prime_candidates")) {
      if (!s["a_prime_candidates"].is_array())
        throw ConfigError("search.a_prime_candidates: expected an array");
      for (const auto& t : s["a_prime_candidates"]) {
        if (!t.is_array() || t.size() != 4) throw ConfigError("search.a_prime_candidates: need 4 integers");
        std::array<int, 4> tuple{};
        for (std::size_t i = 0; i < 4; ++i) {
          if (!t[i].is_number_integer()) throw ConfigError("search.a_prime_candidates: need integers");
          tuple[i] = t[i].get<int>();
        }
        c.search.a_prime_candidates.push_back(tuple);
      }
    }
  }

  if (j.contains("device")) {
    const Json& d = j["device"];
    only_keys(d, {"kind", "partition", "basis_angles"}, "device");
    if (d.contains("kind")) {
      if (!d["kind"].is_string()) throw ConfigError("device.kind: expected a string");
      try {
        c.device.kind = parse_device_kind(d["kind"].get<std::string>());
      } catch (const Error& e) {
        throw ConfigError(std::string("device.kind: ") + e.what());
      }
    }
    if (d.contains("partition")) {
      if (!d["partition"].is_array()) throw ConfigError("device.partition: expected an array");
      for (const auto& g : d["partition"]) {
        if (!g.is_array()) throw ConfigError("device.partition: groups must be arrays");
        std::vector<int> group;
        for (const auto& i : g) {
          if (!i.is_number_integer()) throw ConfigError("device.partition: indices must be integers");
          group.push_back(i.get<int>());
        }
        c.device.groups.push_back(std::move(group));
      }
    }
    if (d.contains("basis_angles")) c.device.basis_angles = quad(d["basis_angles"], "device.basis_angles");
  }

  if (j.contains("input")) c.input = parse_state(j["input"], "input");

  if (j.contains("noise") && !j["noise"].is_null()) {
    const double p = number(j["noise"], "noise");
    if (p < 0.0 || p > 1.0) throw ConfigError("noise: depolarizing probability must lie in [0, 1]");
    c.noise = p;
  }

  if (j.contains("protocol")) {
    const Json& p = j["protocol"];
    only_keys(p, {"n_states", "tol", "seed", "probes"}, "protocol");
    if (p.contains("n_states")) c.protocol.n_states = int(count(p["n_states"], "protocol.n_states"));
    if (p.contains("tol")) c.protocol.tol = number(p["tol"], "protocol.tol");
    if (p.contains("seed")) c.protocol.seed = count(p["seed"], "protocol.seed");
    if (p.contains("probes")) {
      if (!p["probes"].is_array()) throw ConfigError("protocol.probes: expected an array");
      for (const auto& k : p["probes"])
        c.protocol.probes.push_back(k.is_string() ? basis_ket(k.get<std::string>()) : ket_from_json(k));
    }
    if (c.protocol.n_states < 2) throw ConfigError("protocol.n_states must be >= 2");
    if (!(c.protocol.tol > 0.0)) throw ConfigError("protocol.tol must be positive");
  }

  if (j.contains("baseline")) {
    const Json& b = j["baseline"];
    only_keys(b, {"n_samples", "seed"}, "baseline");
    if (b.contains("n_samples")) c.baseline.n_samples = count(b["n_samples"], "baseline.n_samples");
    if (b.contains("seed")) c.baseline.seed = count(b["seed"], "baseline.seed");
    if (c.baseline.n_samples < 1000) throw ConfigError("baseline.n_samples must be >= 1000");
  }

  if (j.contains("metrics")) {
    const Json& m = j["metrics"];
    only_keys(m, {"fidelity", "correlation", "baseline_target"}, "metrics");
    for (const char* key : {"fidelity", "correlation"}) {
      if (!m.contains(key)) continue;
      if (!m[key].is_array() || m[key].size() != 2)
        throw ConfigError(std::string("metrics.") + key + ": expected two states");
      auto& pair = std::string(key) == "fidelity" ? c.metrics.fidelity : c.metrics.correlation;
      for (std::size_t i = 0; i < 2; ++i) pair[i] = parse_state(m[key][i], std::string("metrics.") + key);
    }
    if (m.contains("baseline_target"))
      c.metrics.baseline_target = parse_state(m["baseline_target"], "metrics.baseline_target");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  Json j;
  try {
    j = Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

Json to_json(const ExperimentConfig& c) {
  Json out;
  out["g"] = c.g;
  out["tau"] = c.tau;
  switch (c.pointer.mode) {
    case PointerMode::Default: out["pointer"] = "default"; break;
    case PointerMode::Solve: out["pointer"] = "solve"; break;
    case PointerMode::Explicit:
      out["pointer"] = {{"q1", c.pointer.q1}, {"q2", c.pointer.q2}, {"a_prime", c.pointer.a_prime}};
      break;
  }
  Json search;
  search["max_abs_eigenvalue"] = c.search.max_abs_eigenvalue;
  search["q1_steps"] = c.search.q1_steps;
  search["q1_values"] = c.search.q1_values;
  search["q2_ratios"] = c.search.q2_ratios;
  search["a_prime_candidates"] = c.search.a_prime_candidates;
  out["search"] = std::move(search);

  Json device;
  device["kind"] = std::string(to_string(c.device.kind));
  device["partition"] = c.device.groups;
  device["basis_angles"] = c.device.basis_angles;
  out["device"] = std::move(device);

  out["input"] = state_to_json(c.input);
  out["noise"] = c.noise ? Json(*c.noise) : Json(nullptr);

  Json protocol;
  protocol["n_states"] = c.protocol.n_states;
  protocol["tol"] = c.protocol.tol;
  protocol["seed"] = c.protocol.seed;
  protocol["probes"] = Json::array();
  for (const auto& k : c.protocol.probes) protocol["probes"].push_back(ket_to_json(k));
  out["protocol"] = std::move(protocol);

  out["baseline"] = {{"n_samples", c.baseline.n_samples}, {"seed", c.baseline.seed}};

  Json metrics;
  metrics["fidelity"] =
      Json::array({state_to_json(c.metrics.fidelity[0]), state_to_json(c.metrics.fidelity[1])});
  metrics["correlation"] = Json::array(
      {state_to_json(c.metrics.correlation[0]), state_to_json(c.metrics.correlation[1])});
  metrics["baseline_target"] = state_to_json(c.metrics.baseline_target);
  out["metrics"] = std::move(metrics);
  return out;
}

EigenBasis resolve_basis(const DeviceSpec& spec) {
  const auto& a = spec.basis_angles;
  return EigenBasis::from_angles(a[0], a[1], a[2], a[3]);
}

MeasurementDevice resolve_device(const DeviceSpec& spec) {
  const EigenBasis basis = resolve_basis(spec);
  if (spec.groups.empty()) return default_device(spec.kind, basis);
  MeasurementDevice device = device_from_groups(basis, spec.groups);
  if (device.kind() != spec.kind)
    throw ConfigError("device.partition does not describe a " + std::string(to_string(spec.kind)) +
                      " device");
  return device;
}

}  // namespace lvn::app
