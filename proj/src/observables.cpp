#include "lvn/observables.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <tuple>

#include "lvn/quantum_register.hpp"

namespace lvn {

namespace {

constexpr double kProjectorTol = 1e-10;
constexpr double kOrthonormalTol = 1e-9;

bool all_distinct(const Quad& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v[i] == v[j]) return false;
  return true;
}

double gram_error(const std::array<CKet, 4>& kets) {
  double err = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const Complex expected = i == j ? 1.0 : 0.0;
      err = std::max(err, std::abs(kets[i].dot(kets[j]) - expected));
    }
  return err;
}

}  // namespace

// ---------------------------------------------------------------------------
// EigenBasis

EigenBasis::EigenBasis(std::array<Complex, 4> alpha, std::array<Complex, 4> beta)
    : alpha_(alpha), beta_(beta) {
  for (int j = 0; j < 4; ++j) {
    const Index lo = j < 2 ? 0 : 2;
    chi_[j] = CKet::Zero(4);
    chi_[j](lo) = alpha_[j];
    chi_[j](lo + 1) = beta_[j];
  }
  if (gram_error(chi_) > kProjectorTol)
    throw InvalidBasis("EigenBasis: eigenkets are not orthonormal");
}

EigenBasis EigenBasis::computational() {
  return EigenBasis({1.0, 0.0, 1.0, 0.0}, {0.0, 1.0, 0.0, 1.0});
}

EigenBasis EigenBasis::from_angles(double theta_upper, double phase_upper,
                                   double theta_lower, double phase_lower) {
  const auto c = [](double t) { return Complex(std::cos(t), 0.0); };
  const auto s = [](double t, double p) { return std::polar(std::sin(t), p); };
  return EigenBasis(
      {c(theta_upper), -std::conj(s(theta_upper, phase_upper)), c(theta_lower),
       -std::conj(s(theta_lower, phase_lower))},
      {s(theta_upper, phase_upper), c(theta_upper), s(theta_lower, phase_lower), c(theta_lower)});
}

// ---------------------------------------------------------------------------
// Observable

Observable::Observable(std::vector<double> values, std::vector<CMatrix> projectors)
    : values_(std::move(values)), projectors_(std::move(projectors)) {
  if (values_.empty() || values_.size() != projectors_.size())
    throw InvalidPartition("Observable: need one eigenvalue per projector");
  const Index dim = projectors_.front().rows();
  CMatrix sum = CMatrix::Zero(dim, dim);
  matrix_ = CMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < projectors_.size(); ++k) {
    const CMatrix& p = projectors_[k];
    if (p.rows() != dim || p.cols() != dim)
      throw DimensionMismatch("Observable: projector dimensions differ");
    if (!is_hermitian(p, kProjectorTol) || max_abs(CMatrix(p * p - p)) > kProjectorTol)
      throw InvalidPartition("Observable: element is not an orthogonal projector");
    for (std::size_t l = 0; l < k; ++l)
      if (max_abs(CMatrix(p * projectors_[l])) > kProjectorTol)
        throw InvalidPartition("Observable: projectors are not mutually orthogonal");
    sum += p;
    matrix_ += values_[k] * p;
  }
  if (max_abs(CMatrix(sum - CMatrix::Identity(dim, dim))) > kProjectorTol)
    throw InvalidPartition("Observable: projectors do not sum to the identity");

  for (std::size_t k = 0; k < values_.size(); ++k) {
    auto it = std::find_if(blocks_.begin(), blocks_.end(), [&](const EigenBlock& b) {
      return std::abs(b.value - values_[k]) <= kProjectorTol;
    });
    if (it == blocks_.end())
      blocks_.push_back({values_[k], {int(k)}});
    else
      it->members.push_back(int(k));
  }
}

Observable Observable::from_matrix(const CMatrix& h) {
  const auto eig = eig_hermitian(h);
  std::vector<double> values;
  std::vector<CMatrix> projectors;
  Index start = 0;
  for (Index i = 0; i < eig.values.size(); ++i) {
    // snap each cluster onto its first eigenvalue so blocks group cleanly
    if (i > 0 && eig.values(i) - eig.values(i - 1) >= tol::eigen_cluster) start = i;
    values.push_back(eig.values(start));
    projectors.push_back(outer(eig.vector(i)));
  }
  return Observable(std::move(values), std::move(projectors));
}

CMatrix Observable::block_projector(std::size_t block) const {
  CMatrix out = CMatrix::Zero(dim(), dim());
  for (int k : blocks_.at(block).members) out += projectors_[k];
  return out;
}

bool Observable::is_degenerate() const {
  return std::any_of(blocks_.begin(), blocks_.end(),
                     [](const EigenBlock& b) { return b.members.size() > 1; });
}

Observable build_A(const EigenBasis& basis) {
  std::vector<CMatrix> projectors;
  for (int j = 0; j < 4; ++j) projectors.push_back(basis.projector(j));
  return Observable({1.0, 1.0, -1.0, -1.0}, std::move(projectors));
}

Observable build_Aprime(const Quad& a_prime) {
  return build_Aprime(a_prime, EigenBasis::computational());
}

Observable build_Aprime(const Quad& a_prime, const EigenBasis& basis) {
  if (!all_distinct(a_prime)) throw DegenerateSpectrum("build_Aprime: eigenvalues must be distinct");
  std::vector<CMatrix> projectors;
  for (int j = 0; j < 4; ++j) projectors.push_back(basis.projector(j));
  return Observable({a_prime.begin(), a_prime.end()}, std::move(projectors));
}

Observable build_Q(double q1, double q2) {
  const Quad diag{q1 + q2, q1 - q2, -q1 + q2, -q1 - q2};
  std::vector<CMatrix> projectors;
  for (const char* label : {"00", "01", "10", "11"}) projectors.push_back(outer(basis_ket(label)));
  return Observable({diag.begin(), diag.end()}, std::move(projectors));
}

// ---------------------------------------------------------------------------
// Refining map

double RefiningMap::operator()(double x) const {
  return c_[0] + x * (c_[1] + x * (c_[2] + x * c_[3]));
}

CMatrix RefiningMap::apply(const CMatrix& m) const {
  const Index n = m.rows();
  CMatrix out = c_[3] * CMatrix::Identity(n, n);
  for (int k = 2; k >= 0; --k) out = CMatrix(out * m) + c_[k] * CMatrix::Identity(n, n);
  return out;
}

RefiningMap fit_refining_map(const Quad& a_prime, const Quad& a) {
  if (!all_distinct(a_prime))
    throw DegenerateSpectrum("fit_refining_map: interpolation nodes must be distinct");
  Quad coeffs{};
  for (int j = 0; j < 4; ++j) {
    // expand prod_{m != j} (x - x_m) / (x_j - x_m)
    Quad basis{1.0, 0.0, 0.0, 0.0};
    int degree = 0;
    double denom = 1.0;
    for (int m = 0; m < 4; ++m) {
      if (m == j) continue;
      for (int d = degree + 1; d >= 1; --d) basis[d] = basis[d - 1] - a_prime[m] * basis[d];
      basis[0] *= -a_prime[m];
      ++degree;
      denom *= a_prime[j] - a_prime[m];
    }
    for (int d = 0; d < 4; ++d) coeffs[d] += a[j] * basis[d] / denom;
  }
  return RefiningMap(coeffs);
}

bool verify_refinement(const RefiningMap& f, const Observable& a_prime, const Observable& a) {
  if (a_prime.dim() != a.dim()) return false;
  return max_abs(CMatrix(f.apply(a_prime.matrix()) - a.matrix())) <= 1e-9;
}

// ---------------------------------------------------------------------------
// Pointer basis

namespace {

CKet pointer_state(double g, double tau, const CMatrix& q, double a_prime) {
  return matexp_hermitian(q, g * a_prime * tau) * plus_register(2);
}

}  // namespace

std::array<CKet, 4> pointer_states(double g, double tau, double q1, double q2,
                                   const Quad& a_prime) {
  const CMatrix q = build_Q(q1, q2).matrix();
  std::array<CKet, 4> out;
  for (int j = 0; j < 4; ++j) out[j] = pointer_state(g, tau, q, a_prime[j]);
  return out;
}

CMatrix build_Ua(const std::array<CKet, 4>& states) {
  for (const auto& s : states)
    if (s.size() != 4) throw DimensionMismatch("build_Ua: pointer states must be 4-dimensional");
  if (gram_error(states) > kOrthonormalTol)
    throw NotOrthonormal("build_Ua: pointer states are not orthonormal");
  CMatrix u(4, 4);
  for (int j = 0; j < 4; ++j) u.col(j) = states[j];
  return u;
}

PointerConfig make_pointer_config(double g, double tau, double q1, double q2, const Quad& a_prime) {
  if (!all_distinct(a_prime))
    throw DegenerateSpectrum("pointer config: a' values must be distinct");
  PointerConfig config{g, tau, q1, q2, a_prime, pointer_states(g, tau, q1, q2, a_prime), {}};
  config.Ua = build_Ua(config.pointer_states);
  return config;
}

PointerConfig default_pointer_config(double g, double tau) {
  const double q1 = std::numbers::pi / (4.0 * g * tau);
  return make_pointer_config(g, tau, q1, -q1 / 2.0, {-3.0, 1.0, 3.0, -1.0});
}

bool is_default_solution(const PointerConfig& config) {
  const double q1 = std::numbers::pi / (4.0 * config.g * config.tau);
  const auto close = [](double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y));
  };
  return config.a_prime == Quad{-3.0, 1.0, 3.0, -1.0} && close(config.q1, q1) &&
         close(config.q2, -q1 / 2.0);
}

std::vector<PointerConfig> solve_pointer_config(double g, double tau, const SearchSpace& space) {
  if (!(g > 0.0) || !(tau > 0.0)) throw Error("solve_pointer_config: g and tau must be positive");

  std::vector<std::array<int, 4>> tuples = space.a_prime_candidates;
  if (tuples.empty()) {
    const int n = space.max_abs_eigenvalue;
    if (n < 2) throw Error("solve_pointer_config: need at least 4 distinct candidates");
    for (int a = -n; a <= n; ++a)
      for (int b = -n; b <= n; ++b)
        for (int c = -n; c <= n; ++c)
          for (int d = -n; d <= n; ++d)
            if (all_distinct({double(a), double(b), double(c), double(d)}))
              tuples.push_back({a, b, c, d});
  }
  std::set<int> values;
  for (const auto& t : tuples)
    for (int v : t) values.insert(v);

  std::vector<double> q1s = space.q1_values;
  if (q1s.empty()) {
    if (space.q1_steps < 1) throw Error("solve_pointer_config: q1_steps must be >= 1");
    for (int k = 1; k <= space.q1_steps; ++k)
      q1s.push_back(k * std::numbers::pi / (space.q1_steps * g * tau));
  }

  struct Found {
    std::array<int, 4> a;
    double q1, q2;
  };
  std::vector<Found> found;
  for (double q1 : q1s) {
    for (double ratio : space.q2_ratios) {
      const double q2 = ratio * q1;
      const CMatrix q = build_Q(q1, q2).matrix();
      std::map<int, CKet> kets;
      for (int v : values) kets.emplace(v, pointer_state(g, tau, q, v));
      std::map<std::pair<int, int>, bool> orthogonal;
      const auto orth = [&](int x, int y) {
        const auto key = std::minmax(x, y);
        auto it = orthogonal.find(key);
        if (it == orthogonal.end())
          it = orthogonal.emplace(key, std::abs(kets.at(x).dot(kets.at(y))) <= kOrthonormalTol).first;
        return it->second;
      };
      for (const auto& t : tuples) {
        bool ok = true;
        for (int i = 0; i < 4 && ok; ++i)
          for (int j = i + 1; j < 4 && ok; ++j) ok = orth(t[i], t[j]);
        if (ok) found.push_back({t, q1, q2});
      }
    }
  }
  if (found.empty()) throw NoSolution("solve_pointer_config: no orthonormal pointer basis on the grid");

  std::sort(found.begin(), found.end(), [](const Found& x, const Found& y) {
    return std::tie(x.a, x.q1, x.q2) < std::tie(y.a, y.q1, y.q2);
  });
  std::vector<PointerConfig> out;
  out.reserve(found.size());
  for (const auto& f : found)
    out.push_back(make_pointer_config(g, tau, f.q1, f.q2,
                                      {double(f.a[0]), double(f.a[1]), double(f.a[2]), double(f.a[3])}));
  return out;
}

}  // namespace lvn
