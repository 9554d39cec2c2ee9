#include "focklat/evolution.hpp"

#include "focklat/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace focklat {

namespace {

void require_same_basis(const BasisPtr& a, const BasisPtr& b, const char* what) {
  if (!(a == b || *a == *b)) throw std::invalid_argument(std::string(what) + ": state lives on a different basis");
}

double max_abs(const SparseMatrix& m) {
  double worst = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

}  // namespace

Propagator::Propagator(SectorOperator h, KrylovOptions options) : h_(std::move(h)), options_(options) {
  if (h_.hermiticity_error() > 1e-12 * std::max(1.0, max_abs(h_.matrix)))
    throw std::invalid_argument("propagate: Hamiltonian is not Hermitian");
  if (options_.subspace < 2) throw std::invalid_argument("propagate: Krylov subspace too small");
  dense_ = !options_.force_krylov && h_.basis->size() <= kDenseExpLimit;
  if (!dense_) return;
  if (h_.is_real()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(h_.matrix.real()));
    eigenvalues_ = es.eigenvalues();
    eigenvectors_ = es.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(h_.matrix));
    eigenvalues_ = es.eigenvalues();
    eigenvectors_ = es.eigenvectors();
  }
}

Eigen::MatrixXcd Propagator::unitary(double z) const {
  if (!dense_) throw std::logic_error("Propagator::unitary: operator too large for dense exponentiation");
  const Eigen::VectorXcd phases = (eigenvalues_.cast<Complex>() * Complex(0.0, -z)).array().exp();
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

StateVector Propagator::apply(const StateVector& state, double z) const {
  require_same_basis(state.basis(), h_.basis, "propagate");
  if (z == 0.0) return state;
  if (dense_) {
    const Eigen::VectorXcd coeff = eigenvectors_.adjoint() * state.amplitudes();
    const Eigen::VectorXcd phases = (eigenvalues_.cast<Complex>() * Complex(0.0, -z)).array().exp();
    return StateVector(state.basis(), eigenvectors_ * phases.cwiseProduct(coeff));
  }
  return StateVector(state.basis(), krylov(state.amplitudes(), z));
}

DensityMatrix Propagator::apply(const DensityMatrix& rho, double z) const {
  require_same_basis(rho.basis, h_.basis, "propagate");
  const Eigen::MatrixXcd u = unitary(z);
  return {rho.basis, u * rho.matrix * u.adjoint()};
}

// Lanczos with full reorthogonalization. The a posteriori error of a step
// of length tau is estimated by beta_m |e_m^T exp(-i tau T) e_1|; the step is
// halved (reusing the basis) until it drops below tolerance * tau / |z|.
Eigen::VectorXcd Propagator::krylov(const Eigen::VectorXcd& v, double z) const {
  const Eigen::Index n = v.size();
  const int m_max = static_cast<int>(std::min<Eigen::Index>(options_.subspace, n));
  const double direction = z < 0 ? -1.0 : 1.0;
  double remaining = std::abs(z);
  const double eps = std::numeric_limits<double>::epsilon();
  Eigen::VectorXcd w = v;

  while (remaining > 0.0) {
    const double beta0 = w.norm();
    if (beta0 == 0.0) return w;
    Eigen::MatrixXcd basis(n, m_max + 1);
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m_max), beta = Eigen::VectorXd::Zero(m_max);
    basis.col(0) = w / beta0;
    int m = m_max;
    bool exact = false;
    for (int j = 0; j < m_max; ++j) {
      Eigen::VectorXcd q = h_.matrix * basis.col(j);
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= j; ++i) {
          const Complex c = basis.col(i).dot(q);
          if (pass == 0 && i == j) alpha[j] = c.real();
          q -= c * basis.col(i);
        }
      beta[j] = q.norm();
      if (beta[j] <= 1e-13 * std::max(1.0, std::abs(alpha[j]))) {
        m = j + 1;
        exact = true;
        break;
      }
      basis.col(j + 1) = q / beta[j];
    }

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
      t(j, j) = alpha[j];
      if (j + 1 < m) t(j, j + 1) = t(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const Eigen::MatrixXcd s = es.eigenvectors().cast<Complex>();
    const Eigen::VectorXcd s0 = s.row(0).transpose();

    double tau = remaining;
    Eigen::VectorXcd y;
    while (true) {
      const Eigen::VectorXcd phases =
          (es.eigenvalues().cast<Complex>() * Complex(0.0, -direction * tau)).array().exp();
      y = s * phases.cwiseProduct(s0);
      const double err = exact ? 0.0 : beta0 * beta[m - 1] * std::abs(y[m - 1]);
      // below ~64 ulp the estimate is roundoff and cannot shrink further
      if (err <= std::max(options_.tolerance * tau / std::abs(z), 64 * eps * beta0)) break;
      tau *= 0.5;
      if (tau < 1e-14 * std::abs(z)) throw std::runtime_error("Krylov propagation failed to converge");
    }
    w = beta0 * (basis.leftCols(m) * y);
    remaining = tau >= remaining ? 0.0 : remaining - tau;
  }
  return w;
}

StateVector propagate(const SectorOperator& h, const StateVector& state, double z) {
  return Propagator(h).apply(state, z);
}

StateVector superposition_evolution(std::span<const std::pair<std::complex<double>, StateVector>> terms,
                                    const SectorOperator& h, double z) {
  StateVector stacked(h.basis);
  for (const auto& [d, s] : terms) stacked.amplitudes() += d * change_basis(s, h.basis).amplitudes();
  return propagate(h, stacked, z);
}

void Trajectory::write_csv(std::ostream& out) const {
  out << "z";
  const std::size_t sites = records.empty() ? 0 : records.front().populations.size();
  for (std::size_t i = 0; i < sites; ++i) out << ",pop_site_" << i;
  out << ",fidelity,leakage\n";
  for (const auto& r : records) {
    out << format_number(r.z);
    for (double p : r.populations) out << ',' << format_number(p);
    out << ',' << format_number(r.fidelity) << ',' << format_number(r.leakage) << '\n';
  }
}

Trajectory evolve_trajectory(const Propagator& propagator, const StateVector& state, std::span<const double> z_grid,
                             std::span<const int> leak_sites, const std::optional<StateVector>& reference) {
  const StateVector& ref = reference ? *reference : state;
  Trajectory traj;
  StateVector current = state;
  double current_z = 0.0;
  for (double z : z_grid) {
    // dense propagation is exact from the origin; Krylov steps incrementally
    if (propagator.dense()) {
      current = propagator.apply(state, z);
    } else {
      current = propagator.apply(current, z - current_z);
    }
    current_z = z;
    TrajectoryRecord rec;
    rec.z = z;
    rec.populations = current.mode_populations();
    rec.fidelity = fidelity(ref, current);
    rec.leakage = current.population_on(leak_sites);
    traj.records.push_back(std::move(rec));
  }
  return traj;
}

std::vector<double> uniform_grid(double zmax, int points) {
  if (points < 1) throw std::invalid_argument("uniform_grid: need at least one point");
  if (!(zmax >= 0.0) || !std::isfinite(zmax)) throw std::invalid_argument("uniform_grid: zmax must be >= 0");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = points == 1 ? 0.0 : zmax * i / (points - 1);
  return grid;
}

std::vector<double> default_preparation_grid(double kappa) { return uniform_grid(2.0 * std::numbers::pi / kappa, 400); }

PreparationResult prepare(LatticeKind kind, int photons, std::span<const double> z_grid, double kappa) {
  if (photons < 1) throw std::invalid_argument("prepare: need at least one photon");
  if (z_grid.size() < 3) throw std::invalid_argument("prepare: z grid needs at least three points");
  const int cell = catalog_cell_size(kind);
  std::vector<int> cell_modes;
  for (int k = 1; k <= cell; ++k) cell_modes.push_back(k);
  const auto target_spec = make_spec(kind, cell_modes).sign_free();

  std::vector<Site> sites;
  std::vector<Edge> edges;
  sites.push_back({0, "in", 0.0});
  for (int k = 1; k <= cell; ++k) {
    sites.push_back({k, "cell" + std::to_string(k - 1), 0.0});
    edges.push_back({0, k, kappa});
  }
  const auto coupler = build_custom_lattice(sites, edges, cell_modes);
  const auto basis = FockBasis::fixed(cell + 1, photons);
  const Propagator prop(build_interaction(coupler, basis));

  OccupationVector input(static_cast<std::size_t>(cell + 1), 0);
  input[0] = photons;
  const auto start = StateVector::fock(basis, input);
  const auto target = localized_state(target_spec, photons, basis);
  const std::vector<int> input_site{0};

  PreparationResult res;
  res.kind = kind;
  res.photons = photons;
  res.cell_size = cell;
  res.trajectory = evolve_trajectory(prop, start, z_grid, input_site, target);

  const auto& recs = res.trajectory.records;
  // first local maximum that is a real transfer peak, not roundoff near P = 0
  double highest = 0.0;
  for (const auto& r : recs) highest = std::max(highest, r.fidelity);
  std::size_t peak = 0;
  for (std::size_t i = 1; i + 1 < recs.size(); ++i)
    if (recs[i].fidelity > 0.5 * highest && recs[i].fidelity > recs[i - 1].fidelity &&
        recs[i].fidelity >= recs[i + 1].fidelity) {
      peak = i;
      break;
    }
  if (peak == 0) throw std::runtime_error("prepare: no transfer maximum inside the z grid");
  res.grid_peak_z = recs[peak].z;
  res.grid_peak_probability = recs[peak].fidelity;

  auto p = [&](double z) { return fidelity(target, prop.apply(start, z)); };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = recs[peak - 1].z, b = recs[peak + 1].z;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = p(c), fd = p(d);
  while (b - a > 1e-11 * std::max(1.0, b)) {
    if (fc >= fd) {
      b = d, d = c, fd = fc;
      c = b - inv_phi * (b - a), fc = p(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + inv_phi * (b - a), fd = p(d);
    }
  }
  res.coupling_length = 0.5 * (a + b);
  res.output = prop.apply(start, res.coupling_length);
  res.peak_probability = fidelity(target, *res.output);
  return res;
}

StateVector phase_stage(const StateVector& state, int mode, double delta_beta, double length) {
  const auto& basis = *state.basis();
  if (mode < 0 || mode >= basis.modes()) throw std::out_of_range("phase_stage: mode out of range");
  StateVector out = state;
  const double phi = delta_beta * length;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const int q = basis.state(i)[static_cast<std::size_t>(mode)];
    if (q != 0) out.amplitudes()[static_cast<Eigen::Index>(i)] *= std::polar(1.0, phi * q);
  }
  return out;
}

StateVector embed_state(const StateVector& state, std::span<const int> mode_map, const BasisPtr& target) {
  const auto& basis = *state.basis();
  if (static_cast<int>(mode_map.size()) != basis.modes())
    throw std::invalid_argument("embed_state: one target index per source mode required");
  for (int t : mode_map)
    if (t >= target->modes()) throw std::invalid_argument("embed_state: target mode out of range");
  StateVector out(target);
  OccupationVector occ(static_cast<std::size_t>(target->modes()), 0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& src = basis.state(i);
    std::fill(occ.begin(), occ.end(), 0);
    bool dropped = false;
    for (std::size_t k = 0; k < src.size(); ++k) {
      if (src[k] == 0) continue;
      if (mode_map[k] < 0) {
        dropped = true;
        break;
      }
      occ[static_cast<std::size_t>(mode_map[k])] += src[k];
    }
    if (dropped) continue;
    const auto j = target->index_of(occ);
    if (!j) throw std::invalid_argument("embed_state: target basis lacks an embedded component");
    out.amplitudes()[static_cast<Eigen::Index>(*j)] += state.amplitudes()[static_cast<Eigen::Index>(i)];
  }
  return out;
}

PipelineResult preparation_pipeline(const Lattice& lattice, int photons, std::span<const double> z_grid) {
  if (lattice.edges().empty()) throw std::invalid_argument("preparation_pipeline: lattice has no couplings");
  const double kappa = lattice.edges().front().kappa;
  const auto spec = catalog_spec(lattice);

  PipelineResult res;
  res.preparation = prepare(lattice.kind(), photons, default_preparation_grid(kappa), kappa);

  // phase stage on the coupler modes: cell position k is coupler mode k + 1
  StateVector staged = *res.preparation.output;
  for (int s : spec.sign_sites) staged = phase_stage(staged, s + 1, std::numbers::pi, 1.0);

  std::vector<int> map{-1};
  map.insert(map.end(), spec.modes.begin(), spec.modes.end());
  const auto basis = FockBasis::fixed(lattice.site_count(), photons);
  const auto injected = embed_state(staged, map, basis);
  res.discarded_weight = 1.0 - injected.amplitudes().squaredNorm();
  const auto state = injected.normalized();

  const auto ideal = localized_state(spec, photons, basis);
  res.phase_fidelity = fidelity(ideal, state);

  const Propagator prop(build_hamiltonian(lattice, basis));
  const auto traj = evolve_trajectory(prop, state, z_grid, lattice.connectors(), state);
  for (const auto& r : traj.records) {
    res.max_leakage = std::max(res.max_leakage, r.leakage);
    res.min_lattice_fidelity = std::min(res.min_lattice_fidelity, r.fidelity);
  }
  return res;
}

double to_physical_length(double z_normalized, double kappa_per_mm) {
  if (!(kappa_per_mm > 0.0)) throw std::invalid_argument("to_physical_length: kappa must be positive");
  return z_normalized / kappa_per_mm;
}

}  // namespace focklat
