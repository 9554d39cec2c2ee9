#include "focklat/fockspace.hpp"

#include "focklat/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace focklat {

std::size_t OccupationHash::operator()(const OccupationVector& occ) const noexcept {
  std::size_t h = occ.size();
  for (int n : occ) h ^= static_cast<std::size_t>(n) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

FockBasis::FockBasis(Kind kind, int modes, std::vector<OccupationVector> states)
    : kind_(kind), modes_(modes), states_(std::move(states)) {
  totals_.reserve(states_.size());
  index_.reserve(states_.size());
  min_total_ = states_.empty() ? 0 : std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const auto& occ = states_[i];
    if (static_cast<int>(occ.size()) != modes_)
      throw std::invalid_argument("FockBasis: occupation vector has wrong mode count");
    int total = 0;
    for (int n : occ) {
      if (n < 0) throw std::invalid_argument("FockBasis: negative occupation");
      total += n;
    }
    totals_.push_back(total);
    min_total_ = std::min(min_total_, total);
    max_total_ = std::max(max_total_, total);
    if (!index_.emplace(occ, i).second)
      throw std::invalid_argument("FockBasis: duplicate occupation vector");
  }
  if (kind_ != Kind::custom) {
    // fixed/truncated bases are grouped by total ascending
    for (int t = min_total_; t <= max_total_ + 1; ++t)
      sector_offsets_.push_back(static_cast<std::size_t>(
          std::lower_bound(totals_.begin(), totals_.end(), t) - totals_.begin()));
  }
}

std::shared_ptr<const FockBasis> FockBasis::fixed(int modes, int total) {
  if (modes < 1) throw std::invalid_argument("FockBasis::fixed: mode_count must be >= 1");
  if (total < 0) throw std::invalid_argument("FockBasis::fixed: negative photon number");
  return std::shared_ptr<const FockBasis>(
      new FockBasis(Kind::fixed, modes, weak_compositions(total, modes)));
}

std::shared_ptr<const FockBasis> FockBasis::truncated(int modes, int max_total) {
  if (modes < 1) throw std::invalid_argument("FockBasis::truncated: mode_count must be >= 1");
  if (max_total < 0) throw std::invalid_argument("FockBasis::truncated: negative photon number");
  std::vector<OccupationVector> states;
  for (int n = 0; n <= max_total; ++n) {
    auto sector = weak_compositions(n, modes);
    states.insert(states.end(), std::make_move_iterator(sector.begin()),
                  std::make_move_iterator(sector.end()));
  }
  return std::shared_ptr<const FockBasis>(new FockBasis(Kind::truncated, modes, std::move(states)));
}

std::shared_ptr<const FockBasis> FockBasis::custom(int modes, std::vector<OccupationVector> states) {
  if (modes < 1) throw std::invalid_argument("FockBasis::custom: mode_count must be >= 1");
  return std::shared_ptr<const FockBasis>(new FockBasis(Kind::custom, modes, std::move(states)));
}

std::optional<std::size_t> FockBasis::index_of(const OccupationVector& occ) const {
  auto it = index_.find(occ);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::pair<std::size_t, std::size_t> FockBasis::sector_range(int total) const {
  if (kind_ == Kind::custom) throw std::logic_error("sector_range: custom basis has no sectors");
  if (total < min_total_ || total > max_total_) return {0, 0};
  const auto s = static_cast<std::size_t>(total - min_total_);
  return {sector_offsets_[s], sector_offsets_[s + 1]};
}

// ---------------------------------------------------------------------------

StateVector::StateVector(BasisPtr basis)
    : basis_(std::move(basis)), amplitudes_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis_->size()))) {}

StateVector::StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != basis_->size())
    throw std::invalid_argument("StateVector: amplitude count does not match basis size");
}

StateVector StateVector::fock(BasisPtr basis, const OccupationVector& occ) {
  StateVector s(std::move(basis));
  auto idx = s.basis_->index_of(occ);
  if (!idx) throw std::invalid_argument("StateVector::fock: occupation not in basis");
  s.amplitudes_[static_cast<Eigen::Index>(*idx)] = 1.0;
  return s;
}

Complex StateVector::amplitude(const OccupationVector& occ) const {
  auto idx = basis_->index_of(occ);
  return idx ? amplitudes_[static_cast<Eigen::Index>(*idx)] : Complex{};
}

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("StateVector::normalized: zero vector");
  return StateVector(basis_, amplitudes_ / n);
}

std::vector<double> StateVector::mode_populations() const {
  std::vector<double> pops(static_cast<std::size_t>(basis_->modes()), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    const double p = std::norm(amplitudes_[static_cast<Eigen::Index>(i)]);
    if (p == 0.0) continue;
    const auto& occ = basis_->state(i);
    for (std::size_t m = 0; m < occ.size(); ++m) pops[m] += p * occ[m];
  }
  return pops;
}

double StateVector::population_on(std::span<const int> modes) const {
  const auto pops = mode_populations();
  double total = 0.0;
  for (int m : modes) total += pops.at(static_cast<std::size_t>(m));
  return total;
}

// ---------------------------------------------------------------------------

DensityMatrix DensityMatrix::pure(const StateVector& state) {
  return {state.basis(), state.amplitudes() * state.amplitudes().adjoint()};
}

double DensityMatrix::hermiticity_error() const {
  if (matrix.size() == 0) return 0.0;
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double DensityMatrix::purity() const { return (matrix * matrix).trace().real(); }

std::string DensityMatrix::validate(double algebra_tol, double spectral_tol) const {
  std::ostringstream why;
  if (const double h = hermiticity_error(); h > algebra_tol) {
    why << "not Hermitian (max |rho - rho^dagger| = " << h << ")";
  } else if (const double t = std::abs(trace() - 1.0); t > algebra_tol) {
    why << "trace differs from 1 by " << t;
  } else if (const double e = min_eigenvalue(); e < -spectral_tol) {
    why << "negative eigenvalue " << e;
  }
  return why.str();
}

// ---------------------------------------------------------------------------

std::vector<int> checked_mode_set(std::span<const int> modes, int mode_count) {
  std::vector<int> out(modes.begin(), modes.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (int m : out)
    if (m < 0 || m >= mode_count) throw std::out_of_range("mode index out of range");
  return out;
}

namespace {

std::vector<int> complement(const std::vector<int>& set, int mode_count) {
  std::vector<int> rest;
  for (int m = 0; m < mode_count; ++m)
    if (!std::binary_search(set.begin(), set.end(), m)) rest.push_back(m);
  return rest;
}

OccupationVector restrict_to(const OccupationVector& occ, const std::vector<int>& modes) {
  OccupationVector out;
  out.reserve(modes.size());
  for (int m : modes) out.push_back(occ[static_cast<std::size_t>(m)]);
  return out;
}

std::vector<int> proper_subset(std::span<const int> modes, int mode_count, const char* what) {
  auto set = checked_mode_set(modes, mode_count);
  if (set.empty() || static_cast<int>(set.size()) == mode_count)
    throw std::invalid_argument(std::string(what) + ": mode set must be a nonempty proper subset");
  return set;
}

// Largest photon count found on either side of the bipartition.
int group_cap(const FockBasis& basis, const std::vector<int>& group, const std::vector<int>& rest) {
  int cap = 0;
  for (const auto& occ : basis.states()) {
    int a = 0, b = 0;
    for (int m : group) a += occ[static_cast<std::size_t>(m)];
    for (int m : rest) b += occ[static_cast<std::size_t>(m)];
    cap = std::max({cap, a, b});
  }
  return cap;
}

// Basis indices grouped by their occupation on `rest`, each carrying the
// index of the restriction to `keep` inside `kept_basis`.
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> group_by_rest(
    const FockBasis& basis, const std::vector<int>& keep, const std::vector<int>& rest,
    const FockBasis& kept_basis) {
  std::unordered_map<OccupationVector, std::size_t, OccupationHash> group_of;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> groups;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& occ = basis.state(i);
    auto [it, inserted] = group_of.emplace(restrict_to(occ, rest), groups.size());
    if (inserted) groups.emplace_back();
    const auto kept = kept_basis.index_of(restrict_to(occ, keep));
    groups[it->second].emplace_back(i, *kept);
  }
  return groups;
}

}  // namespace

StateVector apply_ladder(const StateVector& state, int mode, Ladder kind) {
  const auto& basis = *state.basis();
  if (mode < 0 || mode >= basis.modes()) throw std::out_of_range("apply_ladder: mode out of range");
  const int step = kind == Ladder::raise ? 1 : -1;

  BasisPtr target = state.basis();
  if (basis.kind() == FockBasis::Kind::fixed) {
    if (kind == Ladder::lower && basis.max_total() == 0) return StateVector(state.basis());
    target = FockBasis::fixed(basis.modes(), basis.max_total() + step);
  }

  StateVector out(target);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Complex amp = state.amplitudes()[static_cast<Eigen::Index>(i)];
    OccupationVector occ = basis.state(i);
    const int n = occ[static_cast<std::size_t>(mode)];
    if (kind == Ladder::lower && n == 0) continue;
    const double factor = kind == Ladder::lower ? std::sqrt(static_cast<double>(n))
                                                : std::sqrt(static_cast<double>(n + 1));
    occ[static_cast<std::size_t>(mode)] += step;
    const auto j = target->index_of(occ);
    if (!j) {
      if (amp != Complex{}) throw std::domain_error("apply_ladder: result leaves the truncated basis");
      continue;
    }
    out.amplitudes()[static_cast<Eigen::Index>(*j)] += factor * amp;
  }
  return out;
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (!(a.basis() == b.basis() || *a.basis() == *b.basis()))
    throw std::invalid_argument("inner_product: basis mismatch");
  return a.amplitudes().dot(b.amplitudes());
}

double fidelity(const StateVector& a, const StateVector& b) {
  const double na = a.amplitudes().squaredNorm();
  const double nb = b.amplitudes().squaredNorm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::norm(inner_product(a, b)) / (na * nb);
}

DensityMatrix partial_trace(const StateVector& state, std::span<const int> keep_modes) {
  const auto& basis = *state.basis();
  const auto keep = proper_subset(keep_modes, basis.modes(), "partial_trace");
  const auto rest = complement(keep, basis.modes());
  auto kept_basis = FockBasis::truncated(static_cast<int>(keep.size()), basis.max_total());

  const auto dim = static_cast<Eigen::Index>(kept_basis->size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& group : group_by_rest(basis, keep, rest, *kept_basis)) {
    for (const auto& [i, a] : group) {
      const Complex ai = state.amplitudes()[static_cast<Eigen::Index>(i)];
      if (ai == Complex{}) continue;
      for (const auto& [j, b] : group)
        rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
            ai * std::conj(state.amplitudes()[static_cast<Eigen::Index>(j)]);
    }
  }
  return {kept_basis, rho};
}

DensityMatrix partial_trace(const DensityMatrix& input, std::span<const int> keep_modes) {
  const auto& basis = *input.basis;
  const auto keep = proper_subset(keep_modes, basis.modes(), "partial_trace");
  const auto rest = complement(keep, basis.modes());
  auto kept_basis = FockBasis::truncated(static_cast<int>(keep.size()), basis.max_total());

  const auto dim = static_cast<Eigen::Index>(kept_basis->size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& group : group_by_rest(basis, keep, rest, *kept_basis))
    for (const auto& [i, a] : group)
      for (const auto& [j, b] : group)
        rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
            input.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return {kept_basis, rho};
}

BasisPtr product_basis(int modes, std::span<const int> first_group, int max_total) {
  const auto group = checked_mode_set(first_group, modes);
  const auto rest = complement(group, modes);
  if (group.empty() || rest.empty())
    throw std::invalid_argument("product_basis: both groups must be nonempty");
  const auto left = FockBasis::truncated(static_cast<int>(group.size()), max_total);
  const auto right = FockBasis::truncated(static_cast<int>(rest.size()), max_total);
  std::vector<OccupationVector> states;
  states.reserve(left->size() * right->size());
  for (const auto& x : left->states()) {
    for (const auto& y : right->states()) {
      OccupationVector occ(static_cast<std::size_t>(modes), 0);
      for (std::size_t k = 0; k < group.size(); ++k) occ[static_cast<std::size_t>(group[k])] = x[k];
      for (std::size_t k = 0; k < rest.size(); ++k) occ[static_cast<std::size_t>(rest[k])] = y[k];
      states.push_back(std::move(occ));
    }
  }
  return FockBasis::custom(modes, std::move(states));
}

DensityMatrix partial_transpose(const DensityMatrix& rho, std::span<const int> transpose_modes) {
  const auto& basis = *rho.basis;
  const auto group = proper_subset(transpose_modes, basis.modes(), "partial_transpose");
  const auto rest = complement(group, basis.modes());
  const int cap = group_cap(basis, group, rest);

  const auto left = FockBasis::truncated(static_cast<int>(group.size()), cap);
  const auto right = FockBasis::truncated(static_cast<int>(rest.size()), cap);
  auto target = product_basis(basis.modes(), group, cap);
  const auto dim_right = right->size();

  std::vector<std::size_t> ix(basis.size()), iy(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    ix[i] = *left->index_of(restrict_to(basis.state(i), group));
    iy[i] = *right->index_of(restrict_to(basis.state(i), rest));
  }

  const auto dim = static_cast<Eigen::Index>(target->size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const Complex v = rho.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v == Complex{}) continue;
      // <x_i y_i| rho |x_j y_j>  ->  <x_j y_i| rho^T_X |x_i y_j>
      out(static_cast<Eigen::Index>(ix[j] * dim_right + iy[i]),
          static_cast<Eigen::Index>(ix[i] * dim_right + iy[j])) = v;
    }
  }
  return {target, out};
}

StateVector change_basis(const StateVector& state, const BasisPtr& target) {
  if (state.basis()->modes() != target->modes())
    throw std::invalid_argument("change_basis: mode count mismatch");
  StateVector out(target);
  const auto& basis = *state.basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (auto j = target->index_of(basis.state(i)))
      out.amplitudes()[static_cast<Eigen::Index>(*j)] = state.amplitudes()[static_cast<Eigen::Index>(i)];
  }
  return out;
}

DensityMatrix change_basis(const DensityMatrix& rho, const BasisPtr& target) {
  if (rho.basis->modes() != target->modes())
    throw std::invalid_argument("change_basis: mode count mismatch");
  const auto& basis = *rho.basis;
  std::vector<std::optional<std::size_t>> map(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) map[i] = target->index_of(basis.state(i));
  const auto dim = static_cast<Eigen::Index>(target->size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (!map[i]) continue;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if (!map[j]) continue;
      out(static_cast<Eigen::Index>(*map[i]), static_cast<Eigen::Index>(*map[j])) =
          rho.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return {target, out};
}

}  // namespace focklat
