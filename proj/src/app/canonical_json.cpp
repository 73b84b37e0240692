#include "lvn/app/canonical_json.hpp"

#include <cmath>
#include <cstdio>

#include "lvn/app/config.hpp"

namespace lvn::app {

namespace {

std::string format_double(double v) {
  if (!std::isfinite(v)) throw ConfigError("non-finite number cannot be serialised");
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write(const Json& j, std::string& out, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent <= 0) return;
    out += '\n';
    out.append(std::size_t(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) { out += "{}"; return; }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        write(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) { out += "[]"; return; }
      // numeric leaves stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) {
        return e.is_primitive() || (e.is_array() && std::all_of(e.begin(), e.end(),
                                                               [](const Json& x) { return x.is_primitive(); }));
      });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        write(e, out, flat ? 0 : indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string canonical_dump(const Json& doc, int indent) {
  std::string out;
  write(doc, out, indent, 0);
  return out;
}

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

Complex entry_from_json(const Json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw ConfigError("complex entries must be numbers or [re, im] pairs");
}

}  // namespace

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw ConfigError("matrix must be a non-empty array of rows");
  const Index rows = Index(j.size());
  const Index cols = Index(j[0].size());
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || Index(j[r].size()) != cols) throw ConfigError("matrix rows differ in length");
    for (Index c = 0; c < cols; ++c) m(r, c) = entry_from_json(j[r][c]);
  }
  return m;
}

Json ket_to_json(const CKet& k) {
  Json out = Json::array();
  for (Index i = 0; i < k.size(); ++i) out.push_back(Json::array({k(i).real(), k(i).imag()}));
  return out;
}

CKet ket_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("ket must be a non-empty array");
  CKet k(Index(j.size()));
  for (Index i = 0; i < k.size(); ++i) k(i) = entry_from_json(j[i]);
  return k;
}

}  // namespace lvn::app
