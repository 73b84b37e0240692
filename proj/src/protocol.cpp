#include "lvn/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace lvn {

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::LuedersConsistent: return "LuedersConsistent";
    case Verdict::VonNeumann: return "VonNeumann";
    case Verdict::Intermediate: return "Intermediate";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t block, std::uint64_t index) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(block),
                    std::uint32_t(index)};
  return std::mt19937_64(seq);
}

std::vector<std::size_t> degenerate_blocks(const Observable& A) {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < A.degeneracy_partition().size(); ++b)
    if (A.block_projector(b).trace().real() > 1.5) out.push_back(b);
  if (out.empty()) throw BadObservable("hm_discriminate: observable has no degenerate eigenvalue");
  return out;
}

// Orthonormal kets spanning the range of a projector.
std::vector<CKet> block_kets(const CMatrix& projector) {
  const auto eig = eig_hermitian(projector);
  std::vector<CKet> out;
  for (Index i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) > 0.5) out.push_back(eig.vector(i));
  return out;
}

// Off-diagonal residue of every state in a common eigenbasis.
std::optional<CMatrix> common_eigenbasis(const std::vector<const DensityMatrix*>& states,
                                         double tol) {
  if (states.empty()) return std::nullopt;
  const Index d = states.front()->dim();
  CMatrix mix = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < states.size(); ++i) mix += double(i + 1) * states[i]->matrix();
  const CMatrix v = eig_hermitian(mix).vectors;
  for (const auto* s : states) {
    CMatrix rotated = v.adjoint() * s->matrix() * v;
    rotated.diagonal().setZero();
    if (max_abs(rotated) > tol) return std::nullopt;
  }
  return v;
}

std::vector<CKet> canonical_basis(const CMatrix& v) {
  std::vector<CKet> out;
  for (Index c = 0; c < v.cols(); ++c) {
    CKet k = v.col(c);
    Index lead = 0;
    k.cwiseAbs().maxCoeff(&lead);
    k *= std::conj(k(lead)) / std::abs(k(lead));
    out.push_back(k);
  }
  std::stable_sort(out.begin(), out.end(), [](const CKet& x, const CKet& y) {
    Index ix = 0, iy = 0;
    x.cwiseAbs().maxCoeff(&ix);
    y.cwiseAbs().maxCoeff(&iy);
    return ix < iy;
  });
  return out;
}

Classification classify(std::vector<Evidence> evidence, std::size_t n_blocks, double tol) {
  Classification out{Verdict::Inconclusive, std::move(evidence), std::nullopt};

  const auto changed = [&](const Evidence& e) { return e.fidelity < 1.0 - tol; };
  if (std::none_of(out.evidence.begin(), out.evidence.end(), changed)) {
    out.verdict = Verdict::LuedersConsistent;
    return out;
  }

  std::vector<const DensityMatrix*> all;
  for (const auto& e : out.evidence) all.push_back(&e.output);
  if (const auto basis = common_eigenbasis(all, tol)) {
    out.verdict = Verdict::VonNeumann;
    out.recovered_basis = canonical_basis(*basis);
    return out;
  }

  // Blockwise: each probed block either preserved or fully dephased.
  bool any_preserved = false, any_dephased = false;
  for (std::size_t b = 0; b < n_blocks; ++b) {
    std::vector<const DensityMatrix*> outputs;
    bool block_changed = false;
    for (const auto& e : out.evidence)
      if (e.block == b) {
        outputs.push_back(&e.output);
        block_changed = block_changed || changed(e);
      }
    if (outputs.empty()) continue;
    if (!block_changed)
      any_preserved = true;
    else if (common_eigenbasis(outputs, tol))
      any_dephased = true;
    else
      return out;
  }
  if (any_preserved && any_dephased) out.verdict = Verdict::Intermediate;
  return out;
}

Evidence probe(const Channel& device, std::size_t block, const CKet& input) {
  const DensityMatrix rho = DensityMatrix::pure(input);
  DensityMatrix output = device(rho);
  const double f = uhlmann_fidelity(output, rho);
  return {block, input, std::move(output), f};
}

}  // namespace

Classification hm_discriminate(const Channel& device, const Observable& A, int n_states,
                               double tol, std::uint64_t seed) {
  if (n_states < 2) throw Error("hm_discriminate: need at least 2 random states per block");
  const auto blocks = degenerate_blocks(A);
  std::vector<Evidence> evidence;
  for (std::size_t b : blocks) {
    const auto kets = block_kets(A.block_projector(b));
    for (const auto& k : kets) evidence.push_back(probe(device, b, k));
    for (int i = 0; i < n_states; ++i) {
      auto rng = stream(seed, b, std::uint64_t(i));
      std::normal_distribution<double> normal;
      CKet psi = CKet::Zero(A.dim());
      for (const auto& k : kets) {
        const double re = normal(rng);
        const double im = normal(rng);
        psi += Complex(re, im) * k;
      }
      psi.normalize();
      evidence.push_back(probe(device, b, psi));
    }
  }
  return classify(std::move(evidence), A.degeneracy_partition().size(), tol);
}

Classification hm_discriminate_states(const Channel& device, const Observable& A,
                                      const std::vector<CKet>& probes, double tol) {
  const auto blocks = degenerate_blocks(A);
  std::vector<Evidence> evidence;
  for (const auto& input : probes) {
    if (input.size() != A.dim()) throw DimensionMismatch("hm_discriminate: probe dimension");
    const auto home = std::find_if(blocks.begin(), blocks.end(), [&](std::size_t b) {
      return std::abs((A.block_projector(b) * input).norm() - input.norm()) <= 1e-9;
    });
    if (home == blocks.end())
      throw InvalidState("hm_discriminate: probe is not inside a degenerate eigenspace of A");
    evidence.push_back(probe(device, *home, input.normalized()));
  }
  return classify(std::move(evidence), A.degeneracy_partition().size(), tol);
}

double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionMismatch("uhlmann_fidelity: dimensions differ");
  const CMatrix root = matsqrt_psd(sigma.matrix());
  const CMatrix inner = root * rho.matrix() * root;
  const auto eig = eig_hermitian(CMatrix((inner + inner.adjoint()) / 2.0));
  const double floor = detail::roundoff_floor(eig.values);
  double f = 0.0;
  for (Index i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) > floor) f += std::sqrt(eig.values(i));
  return std::clamp(f, 0.0, 1.0);
}

double correlation(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("correlation: dimensions differ");
  const double na = a.norm();
  const double nb = b.norm();
  if (na <= 1e-12 || nb <= 1e-12)
    throw NullMatrix("correlation: undefined for a null deviation matrix");
  return std::clamp((a * b).trace().real() / (na * nb), -1.0, 1.0);
}

double correlation(const DeviationMatrix& a, const DeviationMatrix& b) {
  return correlation(a.matrix(), b.matrix());
}

BaselineReport null_baseline(const DeviationMatrix& target, std::size_t n_samples,
                             std::uint64_t seed) {
  if (n_samples < 1000) throw Error("null_baseline: need at least 1000 samples");
  if (target.matrix().norm() <= 1e-12)
    throw NullMatrix("null_baseline: target is a null deviation matrix");

  const Index d = target.dim();
  auto rng = stream(seed, 0, 0);
  std::normal_distribution<double> normal;
  BaselineReport report;
  report.sample_count = n_samples;
  report.max_correlation = -1.0;
  double sum = 0.0, sum_sq = 0.0;
  RVector diag(d);
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (Index i = 0; i < d; ++i) diag(i) = normal(rng);
    diag.array() -= diag.mean();
    diag.normalize();
    const double c = correlation(target.matrix(), CMatrix(diag.cast<Complex>().asDiagonal()));
    report.max_correlation = std::max(report.max_correlation, c);
    sum += c;
    sum_sq += c * c;
  }
  report.mean = sum / double(n_samples);
  report.stddev = std::sqrt(std::max(0.0, sum_sq / double(n_samples) - report.mean * report.mean));
  return report;
}

double diagonal_projection_bound(const CMatrix& target) {
  const double norm = target.norm();
  if (norm <= 1e-12) throw NullMatrix("diagonal_projection_bound: null target");
  RVector diag = target.diagonal().real();
  diag.array() -= diag.mean();
  return diag.norm() / norm;
}

}  // namespace lvn
