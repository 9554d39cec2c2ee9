#include "focklat/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace focklat {

double SectorOperator::hermiticity_error() const {
  const SparseMatrix diff = matrix - SparseMatrix(matrix.adjoint());
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

bool SectorOperator::is_real() const {
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(matrix, k); it; ++it)
      if (it.value().imag() != 0.0) return false;
  return true;
}

StateVector SectorOperator::apply(const StateVector& state) const {
  if (!(state.basis() == basis || *state.basis() == *basis))
    throw std::invalid_argument("SectorOperator::apply: state lives on a different basis");
  return StateVector(basis, matrix * state.amplitudes());
}

Complex SectorOperator::expectation(const StateVector& state) const {
  return state.amplitudes().dot(apply(state).amplitudes());
}

SectorOperator quadratic_operator(const BasisPtr& basis, const std::vector<double>& onsite,
                                  const std::vector<HopTerm>& hops, std::string label) {
  const int modes = basis->modes();
  if (!onsite.empty() && static_cast<int>(onsite.size()) != modes)
    throw std::invalid_argument("quadratic_operator: onsite terms do not match mode count");
  for (const auto& h : hops)
    if (h.a < 0 || h.b < 0 || h.a >= modes || h.b >= modes || h.a == h.b)
      throw std::invalid_argument("quadratic_operator: invalid hop");

  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(basis->size() * (1 + 2 * hops.size()));
  for (std::size_t col = 0; col < basis->size(); ++col) {
    const auto& occ = basis->state(col);
    if (!onsite.empty()) {
      double diag = 0.0;
      for (int m = 0; m < modes; ++m) diag += onsite[static_cast<std::size_t>(m)] * occ[static_cast<std::size_t>(m)];
      if (diag != 0.0) triplets.emplace_back(static_cast<int>(col), static_cast<int>(col), diag);
    }
    for (const auto& h : hops) {
      for (auto [to, from] : {std::pair{h.a, h.b}, std::pair{h.b, h.a}}) {
        const int n_from = occ[static_cast<std::size_t>(from)];
        if (n_from == 0) continue;
        OccupationVector next = occ;
        next[static_cast<std::size_t>(from)] -= 1;
        next[static_cast<std::size_t>(to)] += 1;
        // hops conserve the total, so the target is present for fixed and truncated bases
        const auto row = basis->index_of(next);
        if (!row) throw std::invalid_argument("quadratic_operator: basis not closed under hopping");
        const double amp = h.weight * std::sqrt(static_cast<double>(n_from)) *
                           std::sqrt(static_cast<double>(next[static_cast<std::size_t>(to)]));
        triplets.emplace_back(static_cast<int>(*row), static_cast<int>(col), amp);
      }
    }
  }
  const auto dim = static_cast<int>(basis->size());
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return {basis, std::move(m), std::move(label)};
}

namespace {

void check_modes(const Lattice& lattice, const BasisPtr& basis) {
  if (basis->modes() != lattice.site_count())
    throw std::invalid_argument("basis mode count does not match lattice site count");
}

}  // namespace

SectorOperator build_interaction(const Lattice& lattice, const BasisPtr& basis) {
  check_modes(lattice, basis);
  std::vector<HopTerm> hops;
  for (const auto& e : lattice.edges()) hops.push_back({e.i, e.j, -e.kappa});
  return quadratic_operator(basis, {}, hops, "H_int");
}

SectorOperator build_free(const Lattice& lattice, const BasisPtr& basis) {
  check_modes(lattice, basis);
  std::vector<double> onsite;
  for (const auto& s : lattice.sites()) onsite.push_back(s.epsilon);
  return quadratic_operator(basis, onsite, {}, "H_0");
}

SectorOperator build_hamiltonian(const Lattice& lattice, const BasisPtr& basis) {
  check_modes(lattice, basis);
  std::vector<double> onsite;
  for (const auto& s : lattice.sites()) onsite.push_back(s.epsilon);
  std::vector<HopTerm> hops;
  for (const auto& e : lattice.edges()) hops.push_back({e.i, e.j, -e.kappa});
  return quadratic_operator(basis, onsite, hops, "H");
}

SectorOperator connector_operator(const Lattice& lattice, const BasisPtr& basis, int connector_site) {
  check_modes(lattice, basis);
  const auto& connectors = lattice.connectors();
  if (std::find(connectors.begin(), connectors.end(), connector_site) == connectors.end())
    throw std::invalid_argument("connector_operator: site " + std::to_string(connector_site) +
                                " is not tagged as a connector");
  const auto& cell = lattice.cell();
  std::vector<HopTerm> hops;
  for (int n : lattice.neighbors(connector_site))
    if (std::find(cell.begin(), cell.end(), n) != cell.end()) hops.push_back({connector_site, n, 1.0});
  return quadratic_operator(basis, {}, hops,
                            "H_S(" + lattice.sites()[static_cast<std::size_t>(connector_site)].label + ")");
}

SectorOperator number_operator(const BasisPtr& basis, int mode) {
  if (mode < 0 || mode >= basis->modes()) throw std::out_of_range("number_operator: mode out of range");
  std::vector<double> onsite(static_cast<std::size_t>(basis->modes()), 0.0);
  onsite[static_cast<std::size_t>(mode)] = 1.0;
  return quadratic_operator(basis, onsite, {}, "n_" + std::to_string(mode));
}

nlohmann::json to_triplet_json(const SectorOperator& op) {
  nlohmann::json triplets = nlohmann::json::array();
  for (int k = 0; k < op.matrix.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(op.matrix, k); it; ++it)
      triplets.push_back({it.row(), it.col(), it.value().real(), it.value().imag()});
  return {{"dim", op.basis->size()}, {"label", op.label}, {"triplets", triplets}};
}

}  // namespace focklat
