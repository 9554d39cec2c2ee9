#pragma once

#include "focklat/fockspace.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace focklat {

struct SchmidtSpectrum {
  std::vector<double> coefficients;  ///< nonincreasing

  std::size_t rank(double tol = 1e-12) const;
};

/// Singular values of the amplitude matrix with rows indexed by the
/// occupations of `group` and columns by the remaining modes.
SchmidtSpectrum schmidt(const StateVector& state, std::span<const int> group);

/// Bipartite amplitude matrix used by schmidt().
Eigen::MatrixXcd bipartite_matrix(const StateVector& state, std::span<const int> group);

struct NegativityResult {
  double value = 0.0;
  std::optional<double> partial_transpose_value;  ///< trace-norm route, when computed
  bool zero_photon = false;                        ///< N = 0: value set to 0 by convention
};

/// (||rho^T_A||_1 - 1)/(d - 1) with d - 1 = N for a fixed-N pure state,
/// evaluated from the Schmidt form (sum k)^2. When the partial-transpose
/// matrix has at most `pt_limit` rows, the trace norm is also computed
/// directly and returned alongside.
NegativityResult negativity(const StateVector& state, std::span<const int> group, std::size_t pt_limit = 600);

/// Negativity of the two-site binomial state from its Schmidt coefficients
/// 2^{-N/2} binom(N,i)^{1/2}, in log-gamma arithmetic.
double negativity_closed_form(int photons);

/// sqrt(2 (1 - 1/d)).
double max_concurrence(int dimension);

/// sqrt(2 (1 - Tr rho_A^2)); normalized divides by max_concurrence(d) with
/// d the smaller number of occupation patterns on either side.
double concurrence(const StateVector& state, std::span<const int> group, bool normalized = false);

/// Concurrence of the two-site binomial state, 2^{1/2 - N} sqrt(4^N - binom(2N, N)),
/// exact binomials for N <= 20 and log-gamma beyond.
double concurrence_closed_form(int photons, bool normalized = false);

/// Smallest eigenvalue of the partial transpose over `group`.
double ph_test(const DensityMatrix& rho, std::span<const int> group);

/// Concurrence of a two-qubit density matrix (basis |00>,|01>,|10>,|11>).
double wootters_concurrence(const Eigen::Matrix4cd& rho);

/// Maps a density matrix of two modes holding at most one photon each onto
/// the two-qubit basis |00>,|01>,|10>,|11> (first mode is the first qubit).
Eigen::Matrix4cd two_mode_qubit_matrix(const DensityMatrix& rho);

// --- tripartite stub states -------------------------------------------------

/// Three-mode stub state (A, B, C) with the sign on B.
StateVector stub_state(int photons);
/// Two-mode binomial state with the sign on the second mode.
StateVector rhomboidal_state(int photons);

struct TripartiteDecomposition {
  int photons = 0;
  std::vector<double> coefficients;  ///< K_{i,N}, i = 0..N
  std::vector<StateVector> partners; ///< |i'_N> on (B, C), normalized
  double coefficient_norm = 0.0;     ///< sum K^2
  double reconstruction_fidelity = 0.0;
};

/// |psi_N>^s = sum_i K_{i,N} |i>_A |i'_N>_{BC} with
/// K_{i,N}^2 = binom(N,i) 2^{N-i} / 3^N and |i'_N> the two-site binomial
/// state of N-i photons on (B, C) with the sign on B.
TripartiteDecomposition stub_tripartite_coefficients(int photons);

struct MonogamyReport {
  int photons = 0;
  double c2_a_bc = 0.0;
  double c2_ab = 0.0;
  double c2_ac = 0.0;
  double gap = 0.0;
  double c2_ab_analytic = 0.0;
  double c2_a_bc_closed_form = 0.0;
};

/// CKW comparison for the stub state. C^2_{A(BC)} = 2(1 - Tr rho_A^2) from
/// the partial trace; C_AB is the weighted average of the pure-state
/// concurrences in the photon-number decomposition of rho_AB (and likewise
/// for AC), squared.
MonogamyReport monogamy(int photons);

/// 2 - (2 / 3^{2N}) sum_M binom(N,M)^2 2^{2(N-M)}.
double c2_a_bc_closed_form(int photons);

/// Weights of rho_AB = sum_M w_M |psi_M><psi_M|: w_M = binom(N,M) 2^M / 3^N.
std::vector<double> rho_ab_weights(int photons);
/// The block form above as a matrix on truncated(2, N).
DensityMatrix rho_ab_block_form(int photons);

struct DecompositionSpread {
  double reference = 0.0;  ///< average concurrence of the photon-number decomposition
  double min = 0.0;
  double max = 0.0;
  double spread() const { return max - min; }
};

/// Average I-concurrence over decompositions of rho_AB obtained by random
/// unitary mixing of the vectors sqrt(w_M)|psi_M>. Deterministic in `seed`.
DecompositionSpread sample_decomposition_spread(int photons, int samples, std::uint64_t seed);

}  // namespace focklat
