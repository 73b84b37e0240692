#pragma once

// Degenerate system observable A, its nondegenerate refinement A', the
// ancilla observable Q, and the pointer basis that couples them.

#include <array>
#include <cstdint>
#include <vector>

#include "lvn/linalg.hpp"

namespace lvn {

using Quad = std::array<double, 4>;

/// Eigenkets chi_0..chi_3 of the degenerate observable. chi_0, chi_1 live in
/// span{|00>, |01>} and chi_2, chi_3 in span{|10>, |11>}:
///   chi_j = alpha_j |phi_lo> + beta_j |phi_hi>
class EigenBasis {
 public:
  EigenBasis(std::array<Complex, 4> alpha, std::array<Complex, 4> beta);

  static EigenBasis computational();

  /// Per block b, chi_2b = cos(t)|lo> + e^{ip} sin(t)|hi> and chi_2b+1 its
  /// orthogonal complement -e^{-ip} sin(t)|lo> + cos(t)|hi>.
  static EigenBasis from_angles(double theta_upper, double phase_upper,
                                double theta_lower, double phase_lower);

  const CKet& chi(int j) const { return chi_.at(j); }
  Complex alpha(int j) const { return alpha_.at(j); }
  Complex beta(int j) const { return beta_.at(j); }
  CMatrix projector(int j) const { return outer(chi_.at(j)); }

 private:
  std::array<Complex, 4> alpha_;
  std::array<Complex, 4> beta_;
  std::array<CKet, 4> chi_;
};

struct EigenBlock {
  double value;
  std::vector<int> members;  // indices into Observable::projectors()
};

/// Hermitian operator together with a chosen spectral decomposition into
/// projectors. For degenerate operators the decomposition is one of many.
class Observable {
 public:
  /// Builds sum_k values[k] * projectors[k]; projectors must be an
  /// orthogonal resolution of the identity.
  Observable(std::vector<double> values, std::vector<CMatrix> projectors);

  /// Decomposes a Hermitian matrix; eigenvalues within the eigensolver's
  /// cluster tolerance are grouped into one block.
  static Observable from_matrix(const CMatrix& h);

  const CMatrix& matrix() const { return matrix_; }
  Index dim() const { return matrix_.rows(); }
  const std::vector<double>& eigenvalues() const { return values_; }
  const std::vector<CMatrix>& projectors() const { return projectors_; }
  const std::vector<EigenBlock>& degeneracy_partition() const { return blocks_; }

  /// Sum of the projectors in a block.
  CMatrix block_projector(std::size_t block) const;

  bool is_degenerate() const;

 private:
  CMatrix matrix_;
  std::vector<double> values_;
  std::vector<CMatrix> projectors_;
  std::vector<EigenBlock> blocks_;
};

/// (Pi_0 + Pi_1) - (Pi_2 + Pi_3)
Observable build_A(const EigenBasis& basis);

/// sum_j a'_j |phi_j><phi_j| in the computational basis.
Observable build_Aprime(const Quad& a_prime);

/// sum_j a'_j |chi_j><chi_j| for an arbitrary refining basis.
Observable build_Aprime(const Quad& a_prime, const EigenBasis& basis);

/// q1 sigma_z (x) 1 + q2 1 (x) sigma_z on the two ancilla qubits.
Observable build_Q(double q1, double q2);

/// Cubic polynomial f with f(a'_j) = a_j at the four refinement nodes.
class RefiningMap {
 public:
  explicit RefiningMap(Quad coefficients) : c_(coefficients) {}

  /// c0 + c1 x + c2 x^2 + c3 x^3
  const Quad& coefficients() const { return c_; }
  double operator()(double x) const;
  CMatrix apply(const CMatrix& m) const;

 private:
  Quad c_;
};

/// Lagrange interpolant through (a_prime[j], a[j]), expanded in monomials.
RefiningMap fit_refining_map(const Quad& a_prime, const Quad& a);

/// f(A') == A within 1e-9.
bool verify_refinement(const RefiningMap& f, const Observable& a_prime, const Observable& a);

/// psi_j = exp(-i g a'_j Q tau) |++>
std::array<CKet, 4> pointer_states(double g, double tau, double q1, double q2,
                                   const Quad& a_prime);

/// Matrix with columns psi_0..psi_3; throws NotOrthonormal unless the
/// pointer states are orthonormal within 1e-9.
CMatrix build_Ua(const std::array<CKet, 4>& pointer_states);

struct PointerConfig {
  double g = 1.0;
  double tau = 1.0;
  double q1 = 0.0;
  double q2 = 0.0;
  Quad a_prime{};
  std::array<CKet, 4> pointer_states;
  CMatrix Ua;
};

/// Validates and completes a pointer configuration.
PointerConfig make_pointer_config(double g, double tau, double q1, double q2, const Quad& a_prime);

/// a' = (-3, 1, 3, -1), q1 = pi/(4 g tau), q2 = -q1/2.
PointerConfig default_pointer_config(double g = 1.0, double tau = 1.0);

bool is_default_solution(const PointerConfig& config);

/// Finite grid over which solve_pointer_config enumerates.
struct SearchSpace {
  int max_abs_eigenvalue = 5;             // a' candidates are integers in [-N, N]
  int q1_steps = 32;                      // q1 = k pi / (q1_steps g tau), k = 1..q1_steps
  std::vector<double> q1_values;          // overrides the q1 grid when non-empty
  std::vector<double> q2_ratios{-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
  std::vector<std::array<int, 4>> a_prime_candidates;  // overrides the a' grid when non-empty
};

/// Every grid point whose pointer states are orthonormal, ordered
/// lexicographically by (a'_0, a'_1, a'_2, a'_3, q1, q2). Throws NoSolution
/// on an empty result.
std::vector<PointerConfig> solve_pointer_config(double g, double tau, const SearchSpace& space = {});

}  // namespace lvn
