#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace focklat {

using Complex = std::complex<double>;

/// Photon count per mode: the Fock label |n_0>|n_1>...
using OccupationVector = std::vector<int>;

struct OccupationHash {
  std::size_t operator()(const OccupationVector& occ) const noexcept;
};

/// Ordered enumeration of multimode occupation vectors.
///
/// Three shapes are supported:
///  - fixed: every vector has total photon number N (one sector);
///  - truncated: all totals 0..N_max, grouped by total ascending;
///  - custom: an explicit list, e.g. the product space used by partial
///    transposition.
///
/// Inside a sector, vectors are sorted lexicographically descending with
/// mode 0 the most significant digit, so |N,0,...> always comes first.
class FockBasis {
 public:
  enum class Kind { fixed, truncated, custom };

  static std::shared_ptr<const FockBasis> fixed(int modes, int total);
  static std::shared_ptr<const FockBasis> truncated(int modes, int max_total);
  static std::shared_ptr<const FockBasis> custom(int modes, std::vector<OccupationVector> states);

  Kind kind() const { return kind_; }
  int modes() const { return modes_; }
  int min_total() const { return min_total_; }
  int max_total() const { return max_total_; }
  std::size_t size() const { return states_.size(); }

  const OccupationVector& state(std::size_t index) const { return states_.at(index); }
  const std::vector<OccupationVector>& states() const { return states_; }
  int total(std::size_t index) const { return totals_.at(index); }

  std::optional<std::size_t> index_of(const OccupationVector& occ) const;
  bool contains(const OccupationVector& occ) const { return index_of(occ).has_value(); }

  /// Half-open index range [begin, end) of the sector with the given total.
  /// Empty range if the sector is absent. Only valid for fixed/truncated bases.
  std::pair<std::size_t, std::size_t> sector_range(int total) const;

  bool operator==(const FockBasis& other) const {
    return modes_ == other.modes_ && states_ == other.states_;
  }

 private:
  FockBasis(Kind kind, int modes, std::vector<OccupationVector> states);

  Kind kind_;
  int modes_;
  int min_total_ = 0;
  int max_total_ = 0;
  std::vector<OccupationVector> states_;
  std::vector<int> totals_;
  std::unordered_map<OccupationVector, std::size_t, OccupationHash> index_;
  std::vector<std::size_t> sector_offsets_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

/// Complex amplitudes over a Fock basis.
class StateVector {
 public:
  explicit StateVector(BasisPtr basis);
  StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes);

  static StateVector fock(BasisPtr basis, const OccupationVector& occ);

  const BasisPtr& basis() const { return basis_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Eigen::VectorXcd& amplitudes() { return amplitudes_; }
  std::size_t size() const { return static_cast<std::size_t>(amplitudes_.size()); }

  Complex amplitude(const OccupationVector& occ) const;
  double norm() const { return amplitudes_.norm(); }
  StateVector normalized() const;

  /// <n_m> for every mode.
  std::vector<double> mode_populations() const;
  /// Total expected photon number on the listed modes.
  double population_on(std::span<const int> modes) const;

 private:
  BasisPtr basis_;
  Eigen::VectorXcd amplitudes_;
};

/// Matrix over a Fock basis. Used both for density operators (Hermitian,
/// PSD, unit trace) and for partially transposed operators (Hermitian, unit
/// trace, possibly indefinite).
struct DensityMatrix {
  BasisPtr basis;
  Eigen::MatrixXcd matrix;

  static DensityMatrix pure(const StateVector& state);

  Complex trace() const { return matrix.trace(); }
  double hermiticity_error() const;
  double min_eigenvalue() const;
  double purity() const;
  /// Returns an empty string if the matrix is Hermitian, trace-one and PSD at
  /// the given tolerances, otherwise a description of the first violation.
  std::string validate(double algebra_tol = 1e-12, double spectral_tol = 1e-10) const;
};

enum class Ladder { raise, lower };

/// Applies a_m^dagger or a_m. The result is unnormalized.
///
/// On a fixed-N basis the result lives on the fixed (N+-1) basis; lowering
/// the vacuum sector returns the zero vector on the input basis. On a
/// truncated basis the basis is kept; raising a component already at N_max
/// throws std::domain_error.
StateVector apply_ladder(const StateVector& state, int mode, Ladder kind);

/// Conjugate-linear in the first argument. Throws on basis mismatch.
Complex inner_product(const StateVector& a, const StateVector& b);

/// |<a|b>|^2 / (|a|^2 |b|^2): equality modulo global phase.
double fidelity(const StateVector& a, const StateVector& b);

/// Reduced state on `keep_modes` (sorted ascending). The result lives on the
/// truncated basis of the kept modes with N_max equal to the input's max total.
DensityMatrix partial_trace(const StateVector& state, std::span<const int> keep_modes);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep_modes);

/// Partial transpose over `transpose_modes`. The result lives on the product
/// basis (truncated X modes) x (truncated remaining modes), X index major.
DensityMatrix partial_transpose(const DensityMatrix& rho, std::span<const int> transpose_modes);

/// Product basis used by partial_transpose.
BasisPtr product_basis(int modes, std::span<const int> first_group, int max_total);

/// Re-expresses a state on another basis of the same modes. Components absent
/// from the target are dropped.
StateVector change_basis(const StateVector& state, const BasisPtr& target);
DensityMatrix change_basis(const DensityMatrix& rho, const BasisPtr& target);

/// Sorted, de-duplicated mode list; throws if any mode is out of range.
std::vector<int> checked_mode_set(std::span<const int> modes, int mode_count);

}  // namespace focklat
