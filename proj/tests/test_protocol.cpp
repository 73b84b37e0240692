#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lvn/devices.hpp"
#include "lvn/protocol.hpp"
#include "test_support.hpp"

using namespace lvn;
using namespace lvn::testing;

namespace {

constexpr double kPi = std::numbers::pi;

Channel channel_of(MeasurementDevice device) {
  return [d = std::move(device)](const DensityMatrix& rho) { return apply_device(d, rho); };
}

Channel noisy(MeasurementDevice device, double p) {
  return [d = std::move(device), p](const DensityMatrix& rho) {
    return depolarize(apply_device(d, rho), p);
  };
}

const Observable& A() {
  static const Observable a = build_A(EigenBasis::computational());
  return a;
}

// Each recovered vector matches one expected vector up to a phase.
bool same_basis_up_to_phase(const std::vector<CKet>& got, const std::vector<CKet>& want) {
  if (got.size() != want.size()) return false;
  for (const auto& g : got) {
    bool hit = false;
    for (const auto& w : want) hit = hit || std::abs(std::abs(w.dot(g)) - 1.0) <= 1e-9;
    if (!hit) return false;
  }
  return true;
}

DeviationMatrix rho_prime_lueders() { return DeviationMatrix(kron(identity(2), sigma_x()) / 2.0); }

}  // namespace

TEST_CASE("Lueders device is LuedersConsistent for every seed") {
  const Channel lueders = channel_of(lueders_device());
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = hm_discriminate(lueders, A(), 3, kDefaultProtocolTol, seed);
    CHECK(c.verdict == Verdict::LuedersConsistent);
    CHECK_FALSE(c.recovered_basis.has_value());
    REQUIRE(c.evidence.size() == 2 * (2 + 3));
    for (const auto& e : c.evidence) CHECK(std::abs(e.fidelity - 1.0) <= 1e-9);
  }
}

TEST_CASE("von Neumann device is detected and its basis recovered for every seed") {
  const Channel vn = channel_of(von_neumann_device());
  std::vector<CKet> computational;
  for (int j = 0; j < 4; ++j) computational.push_back(CKet::Unit(4, j));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = hm_discriminate(vn, A(), 3, kDefaultProtocolTol, seed);
    CHECK(c.verdict == Verdict::VonNeumann);
    REQUIRE(c.recovered_basis.has_value());
    CHECK(same_basis_up_to_phase(*c.recovered_basis, computational));
    // Canonical order follows the dominant component.
    for (int j = 0; j < 4; ++j) CHECK(std::abs((*c.recovered_basis)[j](j)) > 0.99);
  }
}

TEST_CASE("von Neumann device with a rotated refining basis") {
  std::mt19937_64 rng(40);
  std::uniform_real_distribution<double> angle(0.2, 1.2);
  for (int t = 0; t < 10; ++t) {
    const EigenBasis b = EigenBasis::from_angles(angle(rng), angle(rng), angle(rng), angle(rng));
    const auto c = hm_discriminate(channel_of(von_neumann_device(b)), A(), 3, kDefaultProtocolTol, t);
    CHECK(c.verdict == Verdict::VonNeumann);
    REQUIRE(c.recovered_basis.has_value());
    std::vector<CKet> chi;
    for (int j = 0; j < 4; ++j) chi.push_back(b.chi(j));
    CHECK(same_basis_up_to_phase(*c.recovered_basis, chi));
  }
}

TEST_CASE("single probe on an eigenstate of A' hides the von Neumann update") {
  const Channel vn = channel_of(von_neumann_device());
  const auto c = hm_discriminate_states(vn, A(), {basis_ket("00")}, kDefaultProtocolTol);
  CHECK(c.verdict == Verdict::LuedersConsistent);
  REQUIRE(c.evidence.size() == 1);
  CHECK(std::abs(c.evidence[0].fidelity - 1.0) <= 1e-12);

  // A superposition inside the same block exposes it.
  const CKet plus0 = (basis_ket("00") + basis_ket("01")) / std::sqrt(2.0);
  const auto d = hm_discriminate_states(vn, A(), {basis_ket("00"), plus0}, kDefaultProtocolTol);
  CHECK(d.verdict == Verdict::VonNeumann);
  CHECK(std::abs(d.evidence[1].fidelity - 1 / std::sqrt(2.0)) <= 1e-9);
}

TEST_CASE("probes must sit inside a degenerate block") {
  const Channel vn = channel_of(von_neumann_device());
  const CKet across = (basis_ket("00") + basis_ket("10")) / std::sqrt(2.0);
  CHECK_THROWS_AS(hm_discriminate_states(vn, A(), {across}, kDefaultProtocolTol), InvalidState);
  CHECK_THROWS_AS(hm_discriminate_states(vn, A(), {basis_ket("0")}, kDefaultProtocolTol),
                  DimensionMismatch);
}

TEST_CASE("intermediate devices are classified blockwise") {
  for (const auto& groups : std::vector<std::vector<std::vector<int>>>{{{0}, {1}, {2, 3}},
                                                                       {{0, 1}, {2}, {3}}}) {
    const Channel dev = channel_of(device_from_groups(EigenBasis::computational(), groups));
    for (std::uint64_t seed = 0; seed < 5; ++seed)
      CHECK(hm_discriminate(dev, A(), 3, kDefaultProtocolTol, seed).verdict == Verdict::Intermediate);
  }
}

TEST_CASE("a channel that is no projective measurement is Inconclusive") {
  std::mt19937_64 rng(41);
  const CMatrix u = matexp_hermitian(random_hermitian(rng, 4), 0.7);
  const Channel rotate = [u](const DensityMatrix& rho) {
    return DensityMatrix(CMatrix(u * rho.matrix() * u.adjoint()));
  };
  CHECK(hm_discriminate(rotate, A(), 3, kDefaultProtocolTol, 0).verdict == Verdict::Inconclusive);
}

TEST_CASE("noisy devices need a looser tolerance") {
  const double p = 0.05;
  // Depolarizing keeps von Neumann outputs diagonal in the refining basis.
  CHECK(hm_discriminate(noisy(von_neumann_device(), p), A(), 3, kDefaultProtocolTol, 1).verdict ==
        Verdict::VonNeumann);
  // A noisy Lueders device changes every probe slightly.
  CHECK(hm_discriminate(noisy(lueders_device(), p), A(), 3, kDefaultProtocolTol, 1).verdict ==
        Verdict::Inconclusive);
  CHECK(hm_discriminate(noisy(lueders_device(), p), A(), 3, 0.1, 1).verdict ==
        Verdict::LuedersConsistent);
}

TEST_CASE("hm_discriminate preconditions and determinism") {
  const Channel vn = channel_of(von_neumann_device());
  CHECK_THROWS_AS(hm_discriminate(vn, build_Aprime({-3, 1, 3, -1}), 3), BadObservable);
  CHECK_THROWS(hm_discriminate(vn, A(), 1));

  const auto a = hm_discriminate(vn, A(), 4, kDefaultProtocolTol, 7);
  const auto b = hm_discriminate(vn, A(), 4, kDefaultProtocolTol, 7);
  const auto c = hm_discriminate(vn, A(), 4, kDefaultProtocolTol, 8);
  REQUIRE(a.evidence.size() == b.evidence.size());
  for (std::size_t i = 0; i < a.evidence.size(); ++i) {
    CHECK(max_diff(a.evidence[i].input, b.evidence[i].input) == 0.0);
    CHECK(a.evidence[i].fidelity == b.evidence[i].fidelity);
  }
  CHECK(max_diff(a.evidence.back().input, c.evidence.back().input) > 1e-3);
  for (const auto& e : a.evidence) {
    CHECK(std::abs(e.input.norm() - 1.0) <= 1e-12);
    CHECK(max_diff(A().block_projector(e.block) * e.input, e.input) <= 1e-12);
  }
}

TEST_CASE("uhlmann_fidelity examples") {
  const DensityMatrix rho_l(rho_lueders());
  const DensityMatrix rho_n = DensityMatrix::maximally_mixed(4);
  CHECK(std::abs(uhlmann_fidelity(rho_l, rho_n) - 1 / std::sqrt(2.0)) <= 1e-9);
  CHECK(std::abs(uhlmann_fidelity(rho_n, rho_l) - 1 / std::sqrt(2.0)) <= 1e-9);
  CHECK(std::abs(uhlmann_fidelity(rho_l, rho_l) - 1.0) <= 1e-9);
  CHECK(uhlmann_fidelity(DensityMatrix::pure(basis_ket("00")), DensityMatrix::pure(basis_ket("01"))) <=
        1e-12);
  CHECK_THROWS_AS(uhlmann_fidelity(rho_n, DensityMatrix::maximally_mixed(2)), DimensionMismatch);
}

TEST_CASE("uhlmann_fidelity is symmetric and matches the pure-state formula") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 50; ++t) {
    const DensityMatrix a(random_density(rng, 4)), b(random_density(rng, 4));
    const double f = uhlmann_fidelity(a, b);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK(std::abs(f - uhlmann_fidelity(b, a)) <= 1e-9);

    // F(|k><k|, sigma) = sqrt(<k|sigma|k>)
    const CKet k = random_ket(rng, 4);
    const double expected = std::sqrt(k.dot(b.matrix() * k).real());
    CHECK(std::abs(uhlmann_fidelity(DensityMatrix::pure(k), b) - expected) <= 1e-9);
    CHECK(std::abs(uhlmann_fidelity(b, DensityMatrix::pure(k)) - expected) <= 1e-9);
  }
}

TEST_CASE("correlation") {
  const DeviationMatrix rl = rho_prime_lueders();
  CHECK(std::abs(correlation(rl, rl) - 1.0) <= 1e-12);
  CHECK(std::abs(correlation(rl, DeviationMatrix(diag({1, -2, 0.5, 0.5})))) <= 1e-15);
  CHECK_THROWS_AS(correlation(rl, DeviationMatrix::zero(4)), NullMatrix);
  CHECK_THROWS_AS(correlation(DeviationMatrix::zero(4), rl), NullMatrix);

  std::mt19937_64 rng(43);
  for (int t = 0; t < 20; ++t) {
    CMatrix a = random_hermitian(rng, 4), b = random_hermitian(rng, 4);
    a -= a.trace() / 4.0 * identity(4);
    b -= b.trace() / 4.0 * identity(4);
    const double c = correlation(a, b);
    CHECK(c >= -1.0);
    CHECK(c <= 1.0);
    CHECK(std::abs(correlation(CMatrix(3.5 * a), b) - c) <= 1e-12);
    CHECK(std::abs(correlation(a, CMatrix(0.01 * b)) - c) <= 1e-12);
    CHECK(std::abs(correlation(a, CMatrix(-a)) + 1.0) <= 1e-12);
  }
}

TEST_CASE("null baseline against an off-diagonal target") {
  const auto r = null_baseline(rho_prime_lueders(), 100000, 0);
  CHECK(r.sample_count == 100000);
  CHECK(std::abs(r.max_correlation) <= 1e-12);
  CHECK(std::abs(r.mean) <= 1e-12);
  CHECK(r.stddev <= 1e-12);
}

TEST_CASE("null baseline against a diagonal target") {
  const DeviationMatrix target(diag({1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 0, 0}));
  const auto r = null_baseline(target, 100000, 1);
  CHECK(r.max_correlation > 0.99);
  CHECK(r.max_correlation <= 1.0);
  CHECK(std::abs(r.mean) < 0.01);
  CHECK(diagonal_projection_bound(target.matrix()) == doctest::Approx(1.0));
}

TEST_CASE("null baseline approaches the diagonal projection bound") {
  // rho'_L has unit Frobenius norm, so adding a unit traceless diagonal D
  // scaled by eps gives a diagonal fraction of eps / sqrt(1 + eps^2).
  const CMatrix d = diag({1, -1, 1, -1}) / 2.0;
  for (double eps : {0.1, 0.5, 1.0, 2.0}) {
    const CMatrix target = rho_prime_lueders().matrix() + eps * d;
    const double analytic = eps / std::sqrt(1.0 + eps * eps);
    CHECK(diagonal_projection_bound(target) == doctest::Approx(analytic).epsilon(1e-12));
    const auto r = null_baseline(DeviationMatrix(target), 100000, 2);
    CHECK(r.max_correlation <= analytic + 1e-12);
    CHECK(r.max_correlation >= 0.98 * analytic);
  }
}

TEST_CASE("null baseline preconditions and determinism") {
  CHECK_THROWS_AS(null_baseline(DeviationMatrix::zero(4), 1000, 0), NullMatrix);
  CHECK_THROWS(null_baseline(rho_prime_lueders(), 999, 0));
  const DeviationMatrix t(CMatrix(rho_prime_lueders().matrix() + diag({0.3, -0.1, -0.1, -0.1})));
  const auto a = null_baseline(t, 2000, 5), b = null_baseline(t, 2000, 5), c = null_baseline(t, 2000, 6);
  CHECK(a.max_correlation == b.max_correlation);
  CHECK(a.mean == b.mean);
  CHECK(a.mean != c.mean);
  CHECK_THROWS_AS(diagonal_projection_bound(CMatrix::Zero(4, 4)), NullMatrix);
}
