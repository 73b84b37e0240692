#include "lvn/quantum_register.hpp"

#include <array>
#include <cmath>

namespace lvn {

namespace {

constexpr double kTraceTol = 1e-10;

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw DimensionMismatch(std::string(what) + ": matrix must be square and non-empty");
}

}  // namespace

DensityMatrix::DensityMatrix(CMatrix m) : m_(std::move(m)) {
  require_square(m_, "DensityMatrix");
  if (!is_hermitian(m_)) throw InvalidState("DensityMatrix: not Hermitian");
  if (std::abs(m_.trace() - Complex(1.0)) > kTraceTol)
    throw InvalidState("DensityMatrix: trace is not 1");
  const auto eig = eig_hermitian(m_);
  if (eig.values.minCoeff() < -tol::psd_clamp)
    throw InvalidState("DensityMatrix: not positive semidefinite");
}

DensityMatrix DensityMatrix::pure(const CKet& k) {
  if (std::abs(k.norm() - 1.0) > tol::normalized)
    throw InvalidState("DensityMatrix::pure: ket is not normalized");
  return DensityMatrix(outer(k));
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return DensityMatrix(CMatrix::Identity(dim, dim) / double(dim));
}

DeviationMatrix::DeviationMatrix(CMatrix m) : m_(std::move(m)) {
  require_square(m_, "DeviationMatrix");
  if (!is_hermitian(m_)) throw InvalidState("DeviationMatrix: not Hermitian");
  if (std::abs(m_.trace()) > kTraceTol) throw InvalidState("DeviationMatrix: trace is not 0");
}

DeviationMatrix DeviationMatrix::zero(Index dim) {
  return DeviationMatrix(CMatrix::Zero(dim, dim));
}

CKet basis_ket(std::string_view label) {
  if (label.empty() || label.size() > 30) throw BadLabel("basis_ket: label length out of range");
  Index index = 0;
  for (char c : label) {
    if (c != '0' && c != '1') throw BadLabel("basis_ket: non-binary label '" + std::string(label) + "'");
    index = 2 * index + (c - '0');
  }
  CKet k = CKet::Zero(Index(1) << label.size());
  k(index) = 1.0;
  return k;
}

CKet plus_register(int n) {
  if (n < 1) throw DimensionMismatch("plus_register: n must be >= 1");
  const Index dim = Index(1) << n;
  return CKet::Constant(dim, Complex(std::pow(2.0, -0.5 * n), 0.0));
}

DeviationMatrix pops_deviation() {
  CKet minus(2);
  minus << M_SQRT1_2, -M_SQRT1_2;
  const CKet upper = plus_register(4);
  const CKet lower = kron(plus_register(3), minus);
  return DeviationMatrix(outer(upper) - outer(lower));
}

CMatrix dephase_ancilla(const CMatrix& rho) {
  if (rho.rows() != kRegisterDim || rho.cols() != kRegisterDim)
    throw DimensionMismatch("dephase_ancilla: expected 16x16");
  CMatrix out = CMatrix::Zero(kRegisterDim, kRegisterDim);
  for (Index a = 0; a < kAncillaDim; ++a)
    out.block(a * kSystemDim, a * kSystemDim, kSystemDim, kSystemDim) =
        rho.block(a * kSystemDim, a * kSystemDim, kSystemDim, kSystemDim);
  return out;
}

CMatrix dephase_system(const CMatrix& rho) {
  if (rho.rows() != kRegisterDim || rho.cols() != kRegisterDim)
    throw DimensionMismatch("dephase_system: expected 16x16");
  CMatrix out = CMatrix::Zero(kRegisterDim, kRegisterDim);
  for (Index r = 0; r < kRegisterDim; ++r)
    for (Index c = 0; c < kRegisterDim; ++c)
      if (r % kSystemDim == c % kSystemDim) out(r, c) = rho(r, c);
  return out;
}

const CMatrix& pauli(char label) {
  static const std::array<CMatrix, 4> table = [] {
    std::array<CMatrix, 4> t;
    for (auto& m : t) m = CMatrix::Zero(2, 2);
    t[0] << 1, 0, 0, 1;
    t[1] << 0, 1, 1, 0;
    t[2] << 0, Complex(0, -1), Complex(0, 1), 0;
    t[3] << 1, 0, 0, -1;
    return t;
  }();
  switch (label) {
    case 'I': return table[0];
    case 'X': return table[1];
    case 'Y': return table[2];
    case 'Z': return table[3];
    default: throw BadLabel(std::string("pauli: unknown label '") + label + "'");
  }
}

CMatrix pauli_operator(std::string_view label) {
  if (label.empty()) throw BadLabel("pauli_operator: empty label");
  CMatrix out = pauli(label.front());
  for (char c : label.substr(1)) out = kron(out, pauli(c));
  return out;
}

const std::vector<std::string>& pauli_labels() {
  static const std::vector<std::string> labels = [] {
    std::vector<std::string> out;
    for (char a : std::string_view("IXYZ"))
      for (char b : std::string_view("IXYZ"))
        if (a != 'I' || b != 'I') out.push_back({a, b});
    return out;
  }();
  return labels;
}

PauliExpectations pauli_expectations(const CMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw DimensionMismatch("pauli_expectations: expected a 4x4 operator");
  PauliExpectations out;
  for (const auto& label : pauli_labels())
    out[label] = (pauli_operator(label) * rho).trace().real();
  return out;
}

namespace {

CMatrix pauli_sum(const PauliExpectations& expectations, bool check_range) {
  CMatrix out = CMatrix::Zero(4, 4);
  for (const auto& label : pauli_labels()) {
    const auto it = expectations.find(label);
    if (it == expectations.end()) throw MissingLabel("tomography: missing label " + label);
    if (check_range && std::abs(it->second) > 1.0)
      throw InvalidState("tomography: expectation of " + label + " outside [-1, 1]");
    out += it->second * pauli_operator(label);
  }
  for (const auto& [label, value] : expectations)
    if (label.size() != 2 || label == "II" ||
        label.find_first_not_of("IXYZ") != std::string::npos)
      throw BadLabel("tomography: unexpected label " + label);
  return out / 4.0;
}

}  // namespace

DensityMatrix reconstruct_density(const PauliExpectations& expectations) {
  return DensityMatrix(CMatrix::Identity(4, 4) / 4.0 + pauli_sum(expectations, true));
}

DeviationMatrix reconstruct_deviation(const PauliExpectations& expectations) {
  return DeviationMatrix(pauli_sum(expectations, false));
}

}  // namespace lvn
