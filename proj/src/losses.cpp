#include "focklat/losses.hpp"

#include "focklat/combinatorics.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <stdexcept>
#include <string>

namespace focklat {

namespace {

using RealSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("loss parameter gamma must lie in [0, 1)");
}

// <n-k| E_k |n>
double damping_amplitude(int n, int k, double gamma) {
  if (k > n) return 0.0;
  if (k == 0) return std::pow(1.0 - gamma, 0.5 * n);
  if (gamma == 0.0) return 0.0;
  return std::exp(0.5 * (log_binomial(n, k) + k * std::log(gamma) + (n - k) * std::log1p(-gamma)));
}

double binomial_law(int n, int k, double gamma) {
  const double a = damping_amplitude(n, k, gamma);
  return a * a;
}

// E_k on one mode of a multimode basis. Lowering never leaves a truncated basis.
RealSparse mode_kraus(const FockBasis& basis, int mode, int k, double gamma) {
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const int n = basis.state(i)[static_cast<std::size_t>(mode)];
    if (n < k) continue;
    const double v = damping_amplitude(n, k, gamma);
    if (v == 0.0) continue;
    auto occ = basis.state(i);
    occ[static_cast<std::size_t>(mode)] -= k;
    const auto j = basis.index_of(occ);
    if (!j) throw std::domain_error("loss channel: lowered state missing from the basis");
    t.emplace_back(static_cast<int>(*j), static_cast<int>(i), v);
  }
  RealSparse m(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

RealSparse lowering(const FockBasis& basis, int mode) {
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const int n = basis.state(i)[static_cast<std::size_t>(mode)];
    if (n == 0) continue;
    auto occ = basis.state(i);
    occ[static_cast<std::size_t>(mode)] -= 1;
    const auto j = basis.index_of(occ);
    if (!j) throw std::domain_error("lowering: state missing from the basis");
    t.emplace_back(static_cast<int>(*j), static_cast<int>(i), std::sqrt(static_cast<double>(n)));
  }
  RealSparse m(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

std::vector<int> checked_cores(std::span<const int> cores, int modes) {
  auto out = checked_mode_set(cores, modes);
  if (out.size() != cores.size()) throw std::invalid_argument("loss channel: repeated core");
  return out;
}

}  // namespace

double KrausSet::completeness_error() const {
  const Eigen::Index d = n_max + 1;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(d, d);
  for (const auto& e : operators) sum += e.transpose() * e;
  return (sum - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
}

KrausSet kraus_set(double gamma, int n_max) {
  check_gamma(gamma);
  if (n_max < 0) throw std::invalid_argument("kraus_set: negative n_max");
  KrausSet out;
  out.gamma = gamma;
  out.n_max = n_max;
  const Eigen::Index d = n_max + 1;
  for (int k = 0; k <= n_max; ++k) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(d, d);
    for (int n = k; n <= n_max; ++n) e(n - k, n) = damping_amplitude(n, k, gamma);
    out.operators.push_back(std::move(e));
  }
  const double err = out.completeness_error();
  if (err > 1e-12) throw std::logic_error("kraus_set: completeness violated by " + std::to_string(err));
  return out;
}

double loss_parameter(double kappa_prime, double dt) {
  if (kappa_prime < 0.0 || dt < 0.0) throw std::invalid_argument("loss_parameter: negative rate or interval");
  return -std::expm1(-kappa_prime * dt);
}

DensityMatrix lift_to_truncated(const DensityMatrix& rho) {
  const auto& b = *rho.basis;
  if (b.kind() == FockBasis::Kind::truncated) return rho;
  return change_basis(rho, FockBasis::truncated(b.modes(), b.max_total()));
}

std::vector<DensityMatrix> loss_branches(const DensityMatrix& rho, std::span<const int> cores, double gamma) {
  check_gamma(gamma);
  const DensityMatrix lifted = lift_to_truncated(rho);
  const auto& basis = *lifted.basis;
  const auto set = checked_cores(cores, basis.modes());
  const int n_max = basis.max_total();

  std::vector<Eigen::MatrixXcd> branches(static_cast<std::size_t>(n_max + 1));
  for (auto& m : branches) m = Eigen::MatrixXcd::Zero(lifted.matrix.rows(), lifted.matrix.cols());
  branches[0] = lifted.matrix;
  for (int core : set) {
    std::vector<RealSparse> ops;
    for (int j = 0; j <= n_max; ++j) ops.push_back(mode_kraus(basis, core, j, gamma));
    std::vector<Eigen::MatrixXcd> next(branches.size());
    for (auto& m : next) m = Eigen::MatrixXcd::Zero(lifted.matrix.rows(), lifted.matrix.cols());
    for (int k = 0; k <= n_max; ++k) {
      if (branches[static_cast<std::size_t>(k)].isZero(0.0)) continue;
      for (int j = 0; j + k <= n_max; ++j) {
        if (ops[static_cast<std::size_t>(j)].nonZeros() == 0) continue;
        const Eigen::MatrixXcd left = ops[static_cast<std::size_t>(j)].cast<Complex>() * branches[static_cast<std::size_t>(k)];
        next[static_cast<std::size_t>(k + j)] += left * ops[static_cast<std::size_t>(j)].transpose().cast<Complex>();
      }
    }
    branches = std::move(next);
  }
  std::vector<DensityMatrix> out;
  out.reserve(branches.size());
  for (auto& m : branches) out.push_back({lifted.basis, std::move(m)});
  return out;
}

DensityMatrix apply_loss_channel(const DensityMatrix& rho, std::span<const int> cores, double gamma) {
  auto branches = loss_branches(rho, cores, gamma);
  DensityMatrix out{branches.front().basis, Eigen::MatrixXcd::Zero(branches.front().matrix.rows(), branches.front().matrix.cols())};
  for (const auto& b : branches) out.matrix += b.matrix;
  return out;
}

DensityMatrix apply_single_core_channel(const DensityMatrix& rho, int core, double gamma) {
  const int c[] = {core};
  return apply_loss_channel(rho, c, gamma);
}

DensityMatrix apply_two_core_channel(const DensityMatrix& rho, std::pair<int, int> cores, double gamma) {
  if (cores.first == cores.second) throw std::invalid_argument("apply_two_core_channel: cores must differ");
  const int c[] = {cores.first, cores.second};
  return apply_loss_channel(rho, c, gamma);
}

double mean_photon_number(const DensityMatrix& rho) {
  double n = 0.0;
  for (std::size_t i = 0; i < rho.basis->size(); ++i)
    n += rho.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real() * rho.basis->total(i);
  return n;
}

std::vector<double> localized_populations(const DensityMatrix& rho, const LocalizedStateSpec& spec) {
  const auto& b = *rho.basis;
  std::vector<double> out(static_cast<std::size_t>(b.max_total() + 1), 0.0);
  for (int n = b.min_total(); n <= b.max_total(); ++n) {
    const auto psi = localized_state(spec, n, rho.basis);
    out[static_cast<std::size_t>(n)] = psi.amplitudes().dot(rho.matrix * psi.amplitudes()).real();
  }
  return out;
}

double span_fidelity(const DensityMatrix& rho, const LocalizedStateSpec& spec) {
  double sum = 0.0;
  for (double p : localized_populations(rho, spec)) sum += p;
  return sum / rho.trace().real();
}

DensityMatrix master_equation_rhs(const DensityMatrix& rho, std::span<const int> cores, double kappa_prime) {
  const DensityMatrix lifted = lift_to_truncated(rho);
  const auto& basis = *lifted.basis;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(lifted.matrix.rows(), lifted.matrix.cols());
  for (int core : checked_cores(cores, basis.modes())) {
    const Eigen::SparseMatrix<Complex, Eigen::RowMajor> a = lowering(basis, core).cast<Complex>();
    const Eigen::SparseMatrix<Complex, Eigen::RowMajor> ad = a.adjoint();
    const Eigen::SparseMatrix<Complex, Eigen::RowMajor> n = ad * a;
    const Eigen::MatrixXcd a_rho = a * lifted.matrix;
    out += 2.0 * (a_rho * ad) - n * lifted.matrix - lifted.matrix * n;
  }
  return {lifted.basis, 0.5 * kappa_prime * out};
}

DensityMatrix channel_difference_quotient(const DensityMatrix& rho, std::span<const int> cores, double kappa_prime,
                                          double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("channel_difference_quotient: dt must be positive");
  const DensityMatrix lifted = lift_to_truncated(rho);
  const auto out = apply_loss_channel(lifted, cores, loss_parameter(kappa_prime, dt));
  return {lifted.basis, (out.matrix - lifted.matrix) / dt};
}

LossyQubitReport lossy_qubit_report(Complex alpha, Complex beta, int photons, int extra, double gamma) {
  check_gamma(gamma);
  if (photons < 0) throw std::invalid_argument("lossy_qubit_report: negative photon number");
  if (extra < 1) throw std::invalid_argument("lossy_qubit_report: M must be at least 1");
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10)
    throw std::invalid_argument("lossy_qubit_report: |alpha|^2 + |beta|^2 must be 1");

  LossyQubitReport rep;
  rep.alpha = alpha;
  rep.beta = beta;
  rep.photons = photons;
  rep.extra = extra;
  rep.gamma = gamma;

  const int top = photons + extra;
  const auto basis = FockBasis::truncated(2, top);
  const auto spec = make_spec(LatticeKind::rhomboidal, {0, 1});
  std::vector<StateVector> family;
  for (int n = 0; n <= top; ++n) family.push_back(localized_state(spec, n, basis));

  StateVector input(basis, alpha * family[static_cast<std::size_t>(photons)].amplitudes() +
                               beta * family[static_cast<std::size_t>(top)].amplitudes());
  const int cores[] = {0, 1};
  const auto branches = loss_branches(DensityMatrix::pure(input), cores, gamma);

  for (int k = 0; k <= top; ++k) {
    const auto& rho = branches[static_cast<std::size_t>(k)];
    LossBranch b;
    b.lost = k;
    b.weight = rho.trace().real();
    b.predicted_weight = std::norm(alpha) * binomial_law(photons, k, gamma) + std::norm(beta) * binomial_law(top, k, gamma);
    b.alpha_k = alpha * std::sqrt(binomial_law(photons, k, gamma));
    b.beta_k = beta * std::sqrt(binomial_law(top, k, gamma));
    if (b.weight > 1e-14) {
      const Eigen::MatrixXcd unit = rho.matrix / b.weight;
      b.purity = (unit * unit).trace().real();
      Eigen::VectorXcd target = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
      if (k <= photons) target += b.alpha_k * family[static_cast<std::size_t>(photons - k)].amplitudes();
      target += b.beta_k * family[static_cast<std::size_t>(top - k)].amplitudes();
      const double tn = target.squaredNorm();
      if (tn > 0.0) {
        b.fidelity = target.dot(unit * target).real() / tn;
        b.alpha_k /= std::sqrt(tn);
        b.beta_k /= std::sqrt(tn);
      }
      if (k <= photons)
        b.coherence = family[static_cast<std::size_t>(photons - k)].amplitudes().dot(
            unit * family[static_cast<std::size_t>(top - k)].amplitudes());
      rep.min_purity = std::min(rep.min_purity, b.purity);
      rep.min_fidelity = std::min(rep.min_fidelity, b.fidelity);
    }
    rep.branches.push_back(b);
  }
  return rep;
}

}  // namespace focklat
