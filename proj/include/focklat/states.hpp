#pragma once

#include "focklat/fockspace.hpp"
#include "focklat/lattice.hpp"

#include <complex>
#include <span>
#include <vector>

namespace focklat {

/// Multinomial localized state on an ordered set of cell modes:
///   sum_{occ} (-1)^{sum of occ on sign sites} sqrt(N!/prod occ!) / base^{N/2} |occ>
struct LocalizedStateSpec {
  LatticeKind kind = LatticeKind::rhomboidal;
  std::vector<int> modes;          ///< lattice site ids, in formula order
  std::vector<int> sign_sites;     ///< positions into `modes` carrying the (-1)^n factor
  int normalization_base = 2;      ///< equals modes.size()
  double fb_eigenvalue_coeff = 0;  ///< H_int |psi_N> = coeff * kappa * N |psi_N>

  /// Same support, every sign positive (the |psi_N'> reference of the preparation stage).
  LocalizedStateSpec sign_free() const;
};

/// Number of cell sites of the catalog state: 2, 2, 3, 4, 6. Throws for custom.
int catalog_cell_size(LatticeKind kind);

/// Catalog spec of a lattice kind placed on the given cell modes. Mode count
/// must match the kind (2 rhomboidal, 3 stub, 4 Lieb, 6 Kagome).
LocalizedStateSpec make_spec(LatticeKind kind, std::vector<int> modes);

/// Catalog spec on the lattice's designated cell.
LocalizedStateSpec catalog_spec(const Lattice& lattice);

/// Amplitude of a full-lattice occupation vector. Throws if photons sit
/// outside the cell.
double amplitude(const LocalizedStateSpec& spec, const OccupationVector& occupation);

/// |psi_N> on `basis`. The basis must contain the N sector.
StateVector localized_state(const LocalizedStateSpec& spec, int photons, const BasisPtr& basis);

/// Tensor product of localized states living on disjoint cells.
StateVector localized_product(std::span<const LocalizedStateSpec> specs, std::span<const int> photons,
                              const BasisPtr& basis);

/// Checks C_{p+1,q} = -sqrt(q+1)/sqrt(p+1) C_{p,q+1} for every p+q+1 = N.
/// `coefficients[q]` is C_{N-q,q}.
bool verify_recursion(std::span<const double> coefficients, double tol = 1e-14);
/// Two-site specs only.
bool verify_recursion(const LocalizedStateSpec& spec, int photons, double tol = 1e-14);

/// max(20, ceil(|beta|^2 + 10|beta| + 10)).
int default_poisson_cutoff(std::complex<double> beta);

/// Poisson weight beyond `cutoff`: sum_{N > cutoff} e^{-|beta|^2} |beta|^{2N} / N!.
double poisson_tail(std::complex<double> beta, int cutoff);

/// e^{-|beta|^2/2} sum_{N<=cutoff} beta^N / sqrt(N!) |psi_N>, renormalized.
/// `basis` must be truncated with max total >= cutoff. Throws if the Poisson
/// tail beyond the cutoff exceeds 1e-12.
StateVector poissonian_superposition(const LocalizedStateSpec& spec, std::complex<double> beta, int cutoff,
                                     const BasisPtr& basis);

/// Product of coherent states |alpha_m> on each mode, restricted to the basis
/// and renormalized.
StateVector coherent_product_state(std::span<const std::complex<double>> alphas, const BasisPtr& basis);

}  // namespace focklat
