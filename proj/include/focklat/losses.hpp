#pragma once

#include "focklat/fockspace.hpp"
#include "focklat/states.hpp"

#include <Eigen/Dense>

#include <span>
#include <utility>
#include <vector>

namespace focklat {

/// Single-mode amplitude-damping channel on photon numbers 0..n_max.
/// operators[k](n-k, n) = sqrt(binom(n,k) gamma^k (1-gamma)^{n-k}).
struct KrausSet {
  double gamma = 0.0;
  int n_max = 0;
  std::vector<Eigen::MatrixXd> operators;

  /// max |sum_k E_k^T E_k - I|
  double completeness_error() const;
};

/// gamma = 1 - exp(-kappa' dt), must lie in [0, 1).
KrausSet kraus_set(double gamma, int n_max);

/// gamma for a loss rate and an interval.
double loss_parameter(double kappa_prime, double dt);

/// rho lifted to the truncated basis of its modes (same N_max); a no-op for
/// truncated inputs.
DensityMatrix lift_to_truncated(const DensityMatrix& rho);

/// Independent damping of every listed core with the same gamma, resolved by
/// the total number of photons lost: element k is
/// sum_{k_1 + k_2 + ... = k} E ... rho ... E^dagger, unnormalized.
/// All branches live on the truncated basis of the input's modes.
std::vector<DensityMatrix> loss_branches(const DensityMatrix& rho, std::span<const int> cores, double gamma);

/// Sum of loss_branches().
DensityMatrix apply_loss_channel(const DensityMatrix& rho, std::span<const int> cores, double gamma);
DensityMatrix apply_single_core_channel(const DensityMatrix& rho, int core, double gamma);
/// Factorized product E^B_m E^A_k of two single-core channels.
DensityMatrix apply_two_core_channel(const DensityMatrix& rho, std::pair<int, int> cores, double gamma);

/// Expected total photon number.
double mean_photon_number(const DensityMatrix& rho);

/// Populations <psi_n| rho |psi_n> of the localized family of `spec`, n = 0..N_max.
std::vector<double> localized_populations(const DensityMatrix& rho, const LocalizedStateSpec& spec);
/// Sum of localized_populations() divided by the trace.
double span_fidelity(const DensityMatrix& rho, const LocalizedStateSpec& spec);

/// Lindblad right-hand side for zero-temperature damping at rate kappa' on
/// each listed core: (kappa'/2) sum_m (2 a_m rho a_m^dagger - n_m rho - rho n_m).
/// Returned on the truncated basis of the input's modes.
DensityMatrix master_equation_rhs(const DensityMatrix& rho, std::span<const int> cores, double kappa_prime);

/// (Phi_gamma(rho) - rho)/dt with gamma = loss_parameter(kappa', dt).
DensityMatrix channel_difference_quotient(const DensityMatrix& rho, std::span<const int> cores,
                                          double kappa_prime, double dt);

struct LossBranch {
  int lost = 0;
  double weight = 0.0;             ///< trace of the branch
  double predicted_weight = 0.0;   ///< |a|^2 B(N,k) + |b|^2 B(N+M,k) with B the binomial law
  double purity = 0.0;             ///< of the normalized branch
  double fidelity = 0.0;           ///< with alpha_k psi_{N-k} + beta_k psi_{N+M-k}
  Complex alpha_k{0.0, 0.0};
  Complex beta_k{0.0, 0.0};
  Complex coherence{0.0, 0.0};     ///< <psi_{N-k}| rho_k |psi_{N+M-k}> / weight
};

struct LossyQubitReport {
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};
  int photons = 0;
  int extra = 1;
  double gamma = 0.0;
  std::vector<LossBranch> branches;  ///< k = 0..N+M, branches with zero weight included
  double min_purity = 1.0;           ///< over branches with weight > 1e-14
  double min_fidelity = 1.0;
};

/// The qubit alpha |psi_N>^r + beta |psi_{N+M}>^r on two cores through the
/// two-core channel.
LossyQubitReport lossy_qubit_report(Complex alpha, Complex beta, int photons, int extra, double gamma);

}  // namespace focklat
