#include "focklat/entanglement.hpp"

#include "focklat/combinatorics.hpp"
#include "focklat/states.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace focklat {

std::size_t SchmidtSpectrum::rank(double tol) const {
  return static_cast<std::size_t>(
      std::count_if(coefficients.begin(), coefficients.end(), [tol](double k) { return k > tol; }));
}

namespace {

struct Split {
  std::vector<int> group, rest;
};

Split split_modes(std::span<const int> group, int modes) {
  Split s;
  s.group = checked_mode_set(group, modes);
  if (s.group.empty() || static_cast<int>(s.group.size()) == modes)
    throw std::invalid_argument("bipartition must be a nonempty proper subset of the modes");
  for (int m = 0; m < modes; ++m)
    if (!std::binary_search(s.group.begin(), s.group.end(), m)) s.rest.push_back(m);
  return s;
}

OccupationVector restrict(const OccupationVector& occ, const std::vector<int>& modes) {
  OccupationVector out;
  out.reserve(modes.size());
  for (int m : modes) out.push_back(occ[static_cast<std::size_t>(m)]);
  return out;
}

int fixed_total(const StateVector& state, const char* what) {
  const auto& b = *state.basis();
  if (b.min_total() != b.max_total())
    throw std::invalid_argument(std::string(what) + ": state must have a fixed photon number");
  return b.max_total();
}

}  // namespace

Eigen::MatrixXcd bipartite_matrix(const StateVector& state, std::span<const int> group) {
  const auto& basis = *state.basis();
  const Split s = split_modes(group, basis.modes());
  std::unordered_map<OccupationVector, Eigen::Index, OccupationHash> rows, cols;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> where(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto r = rows.emplace(restrict(basis.state(i), s.group), static_cast<Eigen::Index>(rows.size())).first->second;
    auto c = cols.emplace(restrict(basis.state(i), s.rest), static_cast<Eigen::Index>(cols.size())).first->second;
    where[i] = {r, c};
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    m(where[i].first, where[i].second) = state.amplitudes()[static_cast<Eigen::Index>(i)];
  return m;
}

SchmidtSpectrum schmidt(const StateVector& state, std::span<const int> group) {
  const Eigen::MatrixXcd m = bipartite_matrix(state, group);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const Eigen::VectorXd sv = svd.singularValues();
  SchmidtSpectrum out;
  out.coefficients.assign(sv.data(), sv.data() + sv.size());
  return out;
}

NegativityResult negativity(const StateVector& state, std::span<const int> group, std::size_t pt_limit) {
  const int n = fixed_total(state, "negativity");
  NegativityResult res;
  if (n == 0) {
    res.zero_photon = true;
    return res;
  }
  const auto spec = schmidt(state, group);
  double sum = 0.0;
  for (double k : spec.coefficients) sum += k;
  const double norm2 = state.amplitudes().squaredNorm();
  res.value = (sum * sum / norm2 - 1.0) / n;

  const Split s = split_modes(group, state.basis()->modes());
  const int g = static_cast<int>(s.group.size()), r = static_cast<int>(s.rest.size());
  const double pt_dim = std::exp(log_binomial(n + g, g) + log_binomial(n + r, r));
  if (pt_dim <= static_cast<double>(pt_limit)) {
    const auto pt = partial_transpose(DensityMatrix::pure(state), s.group);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt.matrix, Eigen::EigenvaluesOnly);
    res.partial_transpose_value = (es.eigenvalues().cwiseAbs().sum() / norm2 - 1.0) / n;
  }
  return res;
}

double negativity_closed_form(int photons) {
  if (photons < 0) throw std::invalid_argument("negativity_closed_form: negative photon number");
  if (photons == 0) return 0.0;
  double sum = 0.0;
  for (int i = 0; i <= photons; ++i) sum += std::exp(0.5 * (log_binomial(photons, i) - photons * std::log(2.0)));
  return (sum * sum - 1.0) / photons;
}

double max_concurrence(int dimension) {
  if (dimension < 1) throw std::invalid_argument("max_concurrence: dimension must be positive");
  return std::sqrt(2.0 * (1.0 - 1.0 / dimension));
}

double concurrence(const StateVector& state, std::span<const int> group, bool normalized) {
  const Split s = split_modes(group, state.basis()->modes());
  const StateVector unit = state.normalized();
  const auto rho = partial_trace(unit, s.group);
  const double purity = std::min(1.0, rho.purity());
  const double c = std::sqrt(std::max(0.0, 2.0 * (1.0 - purity)));
  if (!normalized) return c;
  const Eigen::MatrixXcd m = bipartite_matrix(state, s.group);
  const int d = static_cast<int>(std::min(m.rows(), m.cols()));
  return d == 1 ? 0.0 : c / max_concurrence(d);
}

double concurrence_closed_form(int photons, bool normalized) {
  if (photons < 0) throw std::invalid_argument("concurrence_closed_form: negative photon number");
  double c;
  if (photons <= kExactMultinomialLimit) {
    const double four_n = std::ldexp(1.0, 2 * photons);
    c = std::pow(2.0, 0.5 - photons) * std::sqrt(four_n - static_cast<double>(binomial(2 * photons, photons)));
  } else {
    c = std::sqrt(2.0 * (1.0 - std::exp(log_binomial(2 * photons, photons) - 2.0 * photons * std::log(2.0))));
  }
  if (!normalized) return c;
  return photons == 0 ? 0.0 : c / max_concurrence(photons + 1);
}

double ph_test(const DensityMatrix& rho, std::span<const int> group) {
  return partial_transpose(rho, group).min_eigenvalue();
}

double wootters_concurrence(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = yy(3, 0) = -1.0;
  yy(1, 2) = yy(2, 1) = 1.0;
  const Eigen::Matrix4cd tilde = yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(rho * tilde, false);
  std::vector<double> l;
  for (int i = 0; i < 4; ++i) l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()[i].real())));
  std::sort(l.begin(), l.end(), std::greater<>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

Eigen::Matrix4cd two_mode_qubit_matrix(const DensityMatrix& rho) {
  const auto& basis = *rho.basis;
  if (basis.modes() != 2) throw std::invalid_argument("two_mode_qubit_matrix: two modes required");
  Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
  std::vector<int> q(basis.size(), -1);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& o = basis.state(i);
    if (o[0] <= 1 && o[1] <= 1) q[i] = 2 * o[0] + o[1];
  }
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const Complex v = rho.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (q[i] < 0 || q[j] < 0) {
        if (std::abs(v) > 1e-12) throw std::invalid_argument("two_mode_qubit_matrix: weight beyond one photon per mode");
        continue;
      }
      out(q[i], q[j]) = v;
    }
  return out;
}

StateVector stub_state(int photons) {
  return localized_state(make_spec(LatticeKind::stub, {0, 1, 2}), photons, FockBasis::fixed(3, photons));
}

StateVector rhomboidal_state(int photons) {
  return localized_state(make_spec(LatticeKind::rhomboidal, {0, 1}), photons, FockBasis::fixed(2, photons));
}

TripartiteDecomposition stub_tripartite_coefficients(int photons) {
  if (photons < 1) throw std::invalid_argument("stub_tripartite_coefficients: need at least one photon");
  TripartiteDecomposition out;
  out.photons = photons;
  const auto basis = FockBasis::fixed(3, photons);
  StateVector rebuilt(basis);
  for (int i = 0; i <= photons; ++i) {
    const double k2 = std::exp(log_binomial(photons, i) + (photons - i) * std::log(2.0) - photons * std::log(3.0));
    out.coefficients.push_back(std::sqrt(k2));
    out.coefficient_norm += k2;
    // sign on B, the first partner mode: (-1)^{N-i} |psi_{N-i}>^r
    out.partners.push_back(localized_state(make_spec(LatticeKind::rhomboidal, {1, 0}), photons - i,
                                           FockBasis::fixed(2, photons - i)));
    const auto& partner = out.partners.back();
    for (std::size_t j = 0; j < partner.size(); ++j) {
      const auto& bc = partner.basis()->state(j);
      const auto idx = *basis->index_of({i, bc[0], bc[1]});
      rebuilt.amplitudes()[static_cast<Eigen::Index>(idx)] =
          out.coefficients.back() * partner.amplitudes()[static_cast<Eigen::Index>(j)];
    }
  }
  out.reconstruction_fidelity = std::norm(inner_product(stub_state(photons), rebuilt));
  return out;
}

std::vector<double> rho_ab_weights(int photons) {
  if (photons < 0) throw std::invalid_argument("rho_ab_weights: negative photon number");
  std::vector<double> w;
  for (int m = 0; m <= photons; ++m)
    w.push_back(std::exp(log_binomial(photons, m) + m * std::log(2.0) - photons * std::log(3.0)));
  return w;
}

DensityMatrix rho_ab_block_form(int photons) {
  const auto basis = FockBasis::truncated(2, photons);
  const auto w = rho_ab_weights(photons);
  const auto dim = static_cast<Eigen::Index>(basis->size());
  DensityMatrix rho{basis, Eigen::MatrixXcd::Zero(dim, dim)};
  for (int m = 0; m <= photons; ++m) {
    const auto psi = change_basis(rhomboidal_state(m), basis);
    rho.matrix += w[static_cast<std::size_t>(m)] * psi.amplitudes() * psi.amplitudes().adjoint();
  }
  return rho;
}

namespace {

// weighted average concurrence over the photon-number blocks of a reduced
// two-mode state; each block of a stub reduction is rank one
double block_average_concurrence(const DensityMatrix& rho) {
  const auto& basis = *rho.basis;
  double avg = 0.0;
  for (int m = basis.min_total(); m <= basis.max_total(); ++m) {
    const auto [lo, hi] = basis.sector_range(m);
    if (lo == hi) continue;
    const auto n = static_cast<Eigen::Index>(hi - lo);
    const Eigen::MatrixXcd block = rho.matrix.block(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(lo), n, n);
    const double weight = block.trace().real();
    if (weight <= 0.0) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block);
    const StateVector top(FockBasis::fixed(2, m), es.eigenvectors().col(n - 1));
    const int first[] = {0};
    avg += weight * (m == 0 ? 0.0 : concurrence(top, first));
  }
  return avg;
}

}  // namespace

double c2_a_bc_closed_form(int photons) {
  if (photons < 0) throw std::invalid_argument("c2_a_bc_closed_form: negative photon number");
  double sum = 0.0;
  for (int m = 0; m <= photons; ++m)
    sum += std::exp(2.0 * log_binomial(photons, m) + 2.0 * (photons - m) * std::log(2.0) - 2.0 * photons * std::log(3.0));
  return 2.0 - 2.0 * sum;
}

MonogamyReport monogamy(int photons) {
  if (photons < 1) throw std::invalid_argument("monogamy: need at least one photon");
  MonogamyReport r;
  r.photons = photons;
  const auto psi = stub_state(photons);
  const int a[] = {0}, ab[] = {0, 1}, ac[] = {0, 2};
  r.c2_a_bc = 2.0 * (1.0 - partial_trace(psi, a).purity());
  const double c_ab = block_average_concurrence(partial_trace(psi, ab));
  const double c_ac = block_average_concurrence(partial_trace(psi, ac));
  r.c2_ab = c_ab * c_ab;
  r.c2_ac = c_ac * c_ac;
  r.gap = r.c2_a_bc - r.c2_ab - r.c2_ac;

  const auto w = rho_ab_weights(photons);
  double analytic = 0.0;
  for (int m = 0; m <= photons; ++m) analytic += w[static_cast<std::size_t>(m)] * concurrence_closed_form(m);
  r.c2_ab_analytic = analytic * analytic;
  r.c2_a_bc_closed_form = c2_a_bc_closed_form(photons);
  return r;
}

DecompositionSpread sample_decomposition_spread(int photons, int samples, std::uint64_t seed) {
  if (photons < 0 || samples < 0) throw std::invalid_argument("sample_decomposition_spread: negative argument");
  const auto basis = FockBasis::truncated(2, photons);
  const auto w = rho_ab_weights(photons);
  const int k = photons + 1;
  Eigen::MatrixXcd vecs(static_cast<Eigen::Index>(basis->size()), k);
  DecompositionSpread out;
  for (int m = 0; m <= photons; ++m) {
    vecs.col(m) = std::sqrt(w[static_cast<std::size_t>(m)]) * change_basis(rhomboidal_state(m), basis).amplitudes();
    out.reference += w[static_cast<std::size_t>(m)] * concurrence_closed_form(m);
  }
  out.min = out.max = out.reference;

  const int first[] = {0};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (int s = 0; s < samples; ++s) {
    Eigen::MatrixXcd z(k, k);
    for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd u = qr.householderQ();
    const Eigen::MatrixXcd rr = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < k; ++j) {
      const Complex d = rr(j, j);
      if (std::abs(d) > 0) u.col(j) *= d / std::abs(d);
    }
    const Eigen::MatrixXcd mixed = vecs * u.transpose();
    double avg = 0.0;
    for (int j = 0; j < k; ++j) {
      const double p = mixed.col(j).squaredNorm();
      if (p < 1e-300) continue;
      avg += p * concurrence(StateVector(basis, mixed.col(j)), first);
    }
    out.min = std::min(out.min, avg);
    out.max = std::max(out.max, avg);
  }
  return out;
}

}  // namespace focklat
