#pragma once

#include "focklat/fockspace.hpp"
#include "focklat/lattice.hpp"

#include <Eigen/Sparse>
#include "json.hpp"

#include <string>
#include <vector>

namespace focklat {

using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

/// Operator stored sparse over a Fock basis. Quadratic operators built here
/// conserve total photon number, so they act within every sector of the basis.
struct SectorOperator {
  BasisPtr basis;
  SparseMatrix matrix;
  std::string label;

  double hermiticity_error() const;
  bool is_real() const;
  StateVector apply(const StateVector& state) const;
  /// <s|O|s> for a state on this operator's basis.
  Complex expectation(const StateVector& state) const;
};

/// One hopping term  weight * (a_to^dagger a_from + a_from^dagger a_to).
struct HopTerm {
  int a = 0;
  int b = 0;
  double weight = 1.0;
};

/// sum_m onsite[m] n_m + sum_hops weight (a_a^dagger a_b + h.c.) on `basis`.
SectorOperator quadratic_operator(const BasisPtr& basis, const std::vector<double>& onsite,
                                  const std::vector<HopTerm>& hops, std::string label);

/// H_int = -sum_edges kappa_ij (a_i^dagger a_j + a_j^dagger a_i).
SectorOperator build_interaction(const Lattice& lattice, const BasisPtr& basis);
/// H_0 = sum_n epsilon_n a_n^dagger a_n.
SectorOperator build_free(const Lattice& lattice, const BasisPtr& basis);
/// H = H_0 + H_int.
SectorOperator build_hamiltonian(const Lattice& lattice, const BasisPtr& basis);

/// Unit-coupling hop between a connector site and its neighbours inside the
/// localized cell:  sum_{c in cell, c ~ s} (a_s^dagger a_c + h.c.).
/// Throws if `connector_site` is not tagged as a connector.
SectorOperator connector_operator(const Lattice& lattice, const BasisPtr& basis, int connector_site);

SectorOperator number_operator(const BasisPtr& basis, int mode);

/// {dim, triplets: [[row, col, re, im], ...]} in row-major order.
nlohmann::json to_triplet_json(const SectorOperator& op);

}  // namespace focklat
