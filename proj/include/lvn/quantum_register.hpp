#pragma once

// States of the 2-ancilla + 2-system qubit register.
//
// Qubits are numbered 1..4 from the leftmost tensor factor; qubits 1,2 are
// the ancilla and 3,4 the system, so a register operator is
// (ancilla 4x4) (x) (system 4x4).

#include <concepts>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lvn/linalg.hpp"

namespace lvn {

inline constexpr Index kAncillaDim = 4;
inline constexpr Index kSystemDim = 4;
inline constexpr Index kRegisterDim = kAncillaDim * kSystemDim;

/// Hermitian, unit-trace, positive semidefinite (to clamping tolerance).
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix m);

  static DensityMatrix pure(const CKet& k);
  static DensityMatrix maximally_mixed(Index dim);

  const CMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  CMatrix m_;
};

/// Hermitian and traceless: the part of an NMR ensemble state that carries
/// signal.
class DeviationMatrix {
 public:
  explicit DeviationMatrix(CMatrix m);

  static DeviationMatrix zero(Index dim);

  const CMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  CMatrix m_;
};

/// Either state kind; every channel in the library is linear and maps each
/// kind to itself.
template <typename S>
concept RegisterState = std::same_as<S, DensityMatrix> || std::same_as<S, DeviationMatrix>;

enum class Subsystem { Ancilla, System };

/// Computational basis ket, e.g. "01" -> |01>, first character = leftmost qubit.
CKet basis_ket(std::string_view label);

/// |+>^(x n)
CKet plus_register(int n);

/// |++++><++++| - |+++-><+++-| on the full register.
DeviationMatrix pops_deviation();

CMatrix dephase_ancilla(const CMatrix& rho);
CMatrix dephase_system(const CMatrix& rho);

/// Removes coherences between different computational states of one
/// subsystem of the 16-dim register, i.e. an ideal projective measurement
/// of that subsystem with the outcome discarded.
template <RegisterState S>
S dephase_subsystem(const S& rho, Subsystem which) {
  if (rho.dim() != kRegisterDim)
    throw DimensionMismatch("dephase_subsystem: expected a 16-dim register state");
  return S(which == Subsystem::Ancilla ? dephase_ancilla(rho.matrix())
                                       : dephase_system(rho.matrix()));
}

// ---------------------------------------------------------------------------
// Two-qubit Pauli tomography

using PauliExpectations = std::map<std::string, double>;

const CMatrix& pauli(char label);

/// The 4x4 operator for a label such as "XZ" (first letter = first qubit).
CMatrix pauli_operator(std::string_view label);

/// The 15 non-identity labels, "IX" .. "ZZ", in lexicographic order of IXYZ.
const std::vector<std::string>& pauli_labels();

/// Tr(P rho) for every non-identity label.
PauliExpectations pauli_expectations(const CMatrix& rho);

/// (I + sum c_P P) / 4. Expectations must lie in [-1, 1].
DensityMatrix reconstruct_density(const PauliExpectations& expectations);

/// (sum c_P P) / 4. No range restriction: deviation matrices are unnormalised.
DeviationMatrix reconstruct_deviation(const PauliExpectations& expectations);

}  // namespace lvn
