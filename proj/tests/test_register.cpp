#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lvn/quantum_register.hpp"
#include "test_support.hpp"

using namespace lvn;
using namespace lvn::testing;

namespace {

CMatrix random_register_matrix(std::mt19937_64& rng) { return random_density(rng, kRegisterDim); }

// Sum over ancilla computational projectors of (P_k (x) I) rho (P_k (x) I).
CMatrix ancilla_projective_channel(const CMatrix& rho) {
  CMatrix out = CMatrix::Zero(kRegisterDim, kRegisterDim);
  for (Index k = 0; k < kAncillaDim; ++k) {
    CKet e = CKet::Zero(kAncillaDim);
    e(k) = 1.0;
    const CMatrix p = kron(outer(e), identity(kSystemDim));
    out += p * rho * p;
  }
  return out;
}

}  // namespace

TEST_CASE("basis_ket") {
  CHECK(max_diff(basis_ket("00"), CKet::Unit(4, 0)) == 0.0);
  CHECK(max_diff(basis_ket("11"), CKet::Unit(4, 3)) == 0.0);
  CHECK(max_diff(basis_ket("01"), CKet::Unit(4, 1)) == 0.0);
  CHECK(max_diff(basis_ket("0"), CKet::Unit(2, 0)) == 0.0);
  CHECK(max_diff(basis_ket("0110"), CKet::Unit(16, 6)) == 0.0);
  CHECK_THROWS_AS(basis_ket("0a"), BadLabel);
  CHECK_THROWS_AS(basis_ket("012"), BadLabel);
  CHECK_THROWS_AS(basis_ket(""), BadLabel);
}

TEST_CASE("plus_register") {
  CKet one(2);
  one << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  CHECK(max_diff(plus_register(1), one) <= 1e-15);
  CHECK(max_diff(plus_register(2), CKet::Constant(4, 0.5)) <= 1e-15);
  CHECK(max_diff(plus_register(4), CKet::Constant(16, 0.25)) <= 1e-15);
  CHECK_THROWS(plus_register(0));
}

TEST_CASE("pops_deviation") {
  const DeviationMatrix pops = pops_deviation();
  REQUIRE(pops.dim() == 16);
  CHECK(std::abs(pops.matrix().trace()) <= 1e-15);
  CHECK(is_hermitian(pops.matrix()));

  const auto eig = eig_hermitian(pops.matrix());
  CHECK(std::abs(eig.values(0) + 1.0) <= 1e-12);
  CHECK(std::abs(eig.values(15) - 1.0) <= 1e-12);
  for (Index i = 1; i < 15; ++i) CHECK(std::abs(eig.values(i)) <= 1e-12);

  // Tr_anc = |++><++| - |+-><+-| computed directly from the two kets.
  const CKet plus = plus_register(1);
  CKet minus(2);
  minus << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
  const CMatrix expected = outer(kron(plus, plus)) - outer(kron(plus, minus));
  CHECK(max_diff(partial_trace(pops.matrix(), 4, 4, Keep::B), expected) <= 1e-12);
  CHECK(max_diff(expected, kron(outer(plus), sigma_x()) ) <= 1e-12);
}

TEST_CASE("state types validate their invariants") {
  CHECK_THROWS_AS(DensityMatrix(diag({0.5, 0.6})), InvalidState);
  CHECK_THROWS_AS(DensityMatrix(diag({1.5, -0.5})), InvalidState);
  CMatrix nh = identity(2) / 2.0;
  nh(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix{nh}, InvalidState);
  CHECK_THROWS_AS(DeviationMatrix(diag({1, 1})), InvalidState);
  CHECK_NOTHROW(DeviationMatrix(diag({1, -1})));
  CHECK_THROWS_AS(DensityMatrix::pure(CKet::Constant(2, 1.0)), InvalidState);
  CHECK(max_diff(DensityMatrix::maximally_mixed(4).matrix(), CMatrix(identity(4) / 4.0)) == 0.0);
}

TEST_CASE("dephase_subsystem examples") {
  std::mt19937_64 rng(10);
  const CMatrix anc = diag({0.1, 0.2, 0.3, 0.4});
  const DensityMatrix product(kron(anc, random_density(rng, 4)));
  CHECK(max_diff(dephase_subsystem(product, Subsystem::Ancilla).matrix(), product.matrix()) <= 1e-15);

  // Bell pair between ancilla qubit 1 and system qubit 3, others in |0>.
  CKet bell = (kron(kron(basis_ket("00"), basis_ket("0")), basis_ket("0")) +
               kron(kron(basis_ket("10"), basis_ket("1")), basis_ket("0"))) /
              std::sqrt(2.0);
  const DensityMatrix rho = DensityMatrix::pure(bell);
  const CMatrix out = dephase_subsystem(rho, Subsystem::Ancilla).matrix();
  CHECK(std::abs(out(0, 2 * 4 + 2)) == 0.0);
  CHECK(std::abs(out(0, 0) - 0.5) <= 1e-15);
  CHECK(std::abs(out(10, 10) - 0.5) <= 1e-15);
  CHECK(std::abs((out * out).trace().real() - 0.5) <= 1e-12);  // mixed

  CHECK_THROWS_AS(dephase_subsystem(DensityMatrix::maximally_mixed(4), Subsystem::Ancilla),
                  DimensionMismatch);
}

TEST_CASE("dephasing equals the ancilla projective channel on 50 random states") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const DensityMatrix rho(random_register_matrix(rng));
    const DensityMatrix once = dephase_subsystem(rho, Subsystem::Ancilla);
    CHECK(max_diff(once.matrix(), ancilla_projective_channel(rho.matrix())) <= 1e-12);
    CHECK(max_diff(dephase_subsystem(once, Subsystem::Ancilla).matrix(), once.matrix()) == 0.0);
    CHECK(std::abs(once.matrix().trace() - rho.matrix().trace()) <= 1e-12);
  }
}

TEST_CASE("system dephasing mirrors ancilla dephasing") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 10; ++t) {
    const CMatrix rho = random_register_matrix(rng);
    CMatrix expected = CMatrix::Zero(16, 16);
    for (Index k = 0; k < 4; ++k) {
      const CMatrix p = kron(identity(4), outer(CKet(CKet::Unit(4, k))));
      expected += p * rho * p;
    }
    CHECK(max_diff(dephase_system(rho), expected) <= 1e-12);
  }
}

TEST_CASE("dephasing deviation matrices keeps them traceless") {
  const DeviationMatrix out = dephase_subsystem(pops_deviation(), Subsystem::Ancilla);
  CHECK(std::abs(out.matrix().trace()) <= 1e-12);
}

TEST_CASE("tomography examples") {
  PauliExpectations zeros;
  for (const auto& l : pauli_labels()) zeros[l] = 0.0;
  CHECK(max_diff(reconstruct_density(zeros).matrix(), CMatrix(identity(4) / 4.0)) <= 1e-15);

  PauliExpectations ix = zeros;
  ix["IX"] = 1.0;
  CHECK(max_diff(reconstruct_density(ix).matrix(), rho_lueders()) <= 1e-15);

  PauliExpectations missing = zeros;
  missing.erase("ZZ");
  CHECK_THROWS_AS(reconstruct_density(missing), MissingLabel);
  CHECK_THROWS_AS(reconstruct_deviation(missing), MissingLabel);

  PauliExpectations out_of_range = zeros;
  out_of_range["XX"] = 1.5;
  CHECK_THROWS_AS(reconstruct_density(out_of_range), InvalidState);
  CHECK(pauli_labels().size() == 15);
}

TEST_CASE("tomography round trip") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 50; ++t) {
    const CMatrix rho = random_density(rng, 4);
    CHECK(max_diff(reconstruct_density(pauli_expectations(rho)).matrix(), rho) <= 1e-12);

    CMatrix dev = random_hermitian(rng, 4);
    dev -= dev.trace() / 4.0 * identity(4);
    CHECK(max_diff(reconstruct_deviation(pauli_expectations(dev)).matrix(), dev) <= 1e-12);
  }
  // Deviation expectations are not bounded by 1: I (x) sigma_x / 2 has c_IX = 2.
  const CMatrix dev = kron(identity(2), sigma_x()) / 2.0;
  const auto c = pauli_expectations(dev);
  CHECK(c.at("IX") == doctest::Approx(2.0));
  CHECK(max_diff(reconstruct_deviation(c).matrix(), dev) <= 1e-15);
}
