#pragma once

#include "focklat/hamiltonian.hpp"
#include "focklat/states.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace focklat {

/// Dimension up to which exp(-iHz) is formed from a dense eigendecomposition.
inline constexpr std::size_t kDenseExpLimit = 2000;

struct KrylovOptions {
  int subspace = 30;
  double tolerance = 1e-12;
  bool force_krylov = false;  ///< skip the dense path regardless of dimension
};

/// exp(-i H z) acting on states of one operator. Small operators are
/// diagonalized once and reused for every z; large ones go through a Lanczos
/// approximation with full reorthogonalization and step-size control.
class Propagator {
 public:
  /// Throws std::invalid_argument if H is not Hermitian.
  explicit Propagator(SectorOperator h, KrylovOptions options = {});

  const SectorOperator& hamiltonian() const { return h_; }
  bool dense() const { return dense_; }

  StateVector apply(const StateVector& state, double z) const;
  /// U(z) rho U(z)^dagger. Dense operators only.
  DensityMatrix apply(const DensityMatrix& rho, double z) const;

  /// Full unitary U(z). Dense operators only.
  Eigen::MatrixXcd unitary(double z) const;

 private:
  Eigen::VectorXcd krylov(const Eigen::VectorXcd& v, double z) const;

  SectorOperator h_;
  KrylovOptions options_;
  bool dense_ = false;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
};

StateVector propagate(const SectorOperator& h, const StateVector& state, double z);

/// sum_N D_N |psi_N>, stacked on `basis`, evolved under h (which must live on
/// the same basis).
StateVector superposition_evolution(std::span<const std::pair<std::complex<double>, StateVector>> terms,
                                    const SectorOperator& h, double z);

struct TrajectoryRecord {
  double z = 0.0;
  std::vector<double> populations;
  double fidelity = 0.0;
  double leakage = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;

  /// Header `z,pop_site_0,...,fidelity,leakage` then one line per record.
  void write_csv(std::ostream& out) const;
};

/// Evolves `state` over `z_grid`, recording site populations, fidelity with
/// `reference` (defaults to the initial state, modulo global phase) and the
/// population on `leak_sites`.
Trajectory evolve_trajectory(const Propagator& propagator, const StateVector& state, std::span<const double> z_grid,
                             std::span<const int> leak_sites, const std::optional<StateVector>& reference = {});

/// `points` evenly spaced values over [0, zmax].
std::vector<double> uniform_grid(double zmax, int points);

/// Default preparation scan: 400 points over [0, 2 pi / kappa].
std::vector<double> default_preparation_grid(double kappa = 1.0);

struct PreparationResult {
  LatticeKind kind = LatticeKind::rhomboidal;
  int photons = 0;
  int cell_size = 0;
  Trajectory trajectory;  ///< fidelity = P(z); leakage = population left on the input waveguide
  double grid_peak_z = 0.0;
  double grid_peak_probability = 0.0;
  double coupling_length = 0.0;  ///< refined first maximum
  double peak_probability = 0.0;
  std::optional<StateVector> output;  ///< coupler output at coupling_length, on the coupler basis
};

/// Coupler stage: input waveguide 0 holding N photons, coupled with equal
/// kappa to each cell site (modes 1..cell_size), cell sites uncoupled.
/// Probability of the sign-free multinomial state on the cell is recorded
/// along `z_grid`; the first local maximum is refined by golden section.
PreparationResult prepare(LatticeKind kind, int photons, std::span<const double> z_grid, double kappa = 1.0);

/// Multiplies each component by exp(i delta_beta * length * n_mode).
StateVector phase_stage(const StateVector& state, int mode, double delta_beta, double length);

/// Maps a state on `source` modes into `target`; source mode k becomes
/// target mode `mode_map[k]`, other target modes are empty. Components with
/// photons on unmapped source modes (mode_map[k] < 0) are dropped.
StateVector embed_state(const StateVector& state, std::span<const int> mode_map, const BasisPtr& target);

struct PipelineResult {
  PreparationResult preparation;
  double discarded_weight = 0.0;     ///< weight left on the input waveguide at l_c
  double phase_fidelity = 0.0;       ///< phase-stage output vs the signed localized state
  double max_leakage = 0.0;          ///< connector population in the lattice, max over z
  double min_lattice_fidelity = 1.0;
};

/// prepare -> drop the input waveguide -> phase stage (pi on each sign site)
/// -> inject into the lattice cell -> propagate over `z_grid`.
PipelineResult preparation_pipeline(const Lattice& lattice, int photons, std::span<const double> z_grid);

/// Coupler length in physical units given kappa in 1/mm: z_phys = z / kappa.
double to_physical_length(double z_normalized, double kappa_per_mm);

}  // namespace focklat
