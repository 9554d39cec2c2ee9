#include "focklat/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

namespace focklat {

namespace {

struct KindName {
  LatticeKind kind;
  std::string_view name;
};

constexpr std::array<KindName, 6> kKindNames{{
    {LatticeKind::rhomboidal, "rhomboidal"},
    {LatticeKind::symmetric_rhomboidal, "symmetric_rhomboidal"},
    {LatticeKind::stub, "stub"},
    {LatticeKind::lieb, "lieb"},
    {LatticeKind::kagome, "kagome"},
    {LatticeKind::custom, "custom"},
}};

}  // namespace

std::string_view to_string(LatticeKind kind) {
  for (const auto& entry : kKindNames)
    if (entry.kind == kind) return entry.name;
  return "unknown";
}

LatticeKind lattice_kind_from_string(std::string_view name) {
  for (const auto& entry : kKindNames)
    if (entry.name == name) return entry.kind;
  throw std::invalid_argument("unknown lattice kind '" + std::string(name) + "'");
}

UnitCell unit_cell(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::rhomboidal:
    case LatticeKind::symmetric_rhomboidal: {
      // A and B sit above/below the row of S sites; S_n couples to A, B of
      // cells n and n+1.
      UnitCell cell{1, {"A", "B", "S"}, {{2, 0, {0, 0}}, {2, 1, {0, 0}}, {2, 0, {1, 0}}, {2, 1, {1, 0}}}};
      if (kind == LatticeKind::symmetric_rhomboidal) cell.hops.push_back({0, 1, {0, 0}});
      return cell;
    }
    case LatticeKind::stub:
      // chain ... S_n - B_n - S_{n+1} ..., stub A_n hanging from S_n
      return {1, {"A", "S", "B"}, {{0, 1, {0, 0}}, {1, 2, {0, 0}}, {2, 1, {1, 0}}}};
    case LatticeKind::lieb:
      // A corner, B on the horizontal bond, C on the vertical bond
      return {2, {"A", "B", "C"}, {{0, 1, {0, 0}}, {1, 0, {1, 0}}, {0, 2, {0, 0}}, {2, 0, {0, 1}}}};
    case LatticeKind::kagome:
      // up triangle inside the cell, down triangle {B(i,j), A(i+1,j), C(i+1,j-1)}
      return {2,
              {"A", "B", "C"},
              {{0, 1, {0, 0}}, {0, 2, {0, 0}}, {1, 2, {0, 0}}, {1, 0, {1, 0}}, {1, 2, {1, -1}}, {0, 2, {0, -1}}}};
    case LatticeKind::custom:
      break;
  }
  throw std::invalid_argument("lattice kind has no unit cell");
}

LatticeSize default_size(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::rhomboidal:
    case LatticeKind::symmetric_rhomboidal:
    case LatticeKind::stub:
      return {3, 1};
    case LatticeKind::lieb:
    case LatticeKind::kagome:
      return {3, 3};
    case LatticeKind::custom:
      break;
  }
  throw std::invalid_argument("custom lattices have no default size");
}

// ---------------------------------------------------------------------------

Lattice::Lattice(LatticeKind kind, std::vector<Site> sites, std::vector<Edge> edges, std::vector<int> cell,
                 std::vector<int> connectors, std::optional<UnitCell> unit_cell)
    : kind_(kind),
      sites_(std::move(sites)),
      edges_(std::move(edges)),
      cell_(std::move(cell)),
      connectors_(std::move(connectors)),
      unit_cell_(std::move(unit_cell)) {
  const int n = site_count();
  for (int i = 0; i < n; ++i) {
    if (sites_[static_cast<std::size_t>(i)].id != i)
      throw std::invalid_argument("Lattice: site ids must be 0..n-1 in order");
    if (!std::isfinite(sites_[static_cast<std::size_t>(i)].epsilon))
      throw std::invalid_argument("Lattice: non-finite propagation constant");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges_) {
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n || e.i == e.j)
      throw std::invalid_argument("Lattice: invalid edge endpoints");
    if (!(e.kappa > 0.0) || !std::isfinite(e.kappa))
      throw std::invalid_argument("Lattice: coupling constants must be positive");
    if (!seen.emplace(std::min(e.i, e.j), std::max(e.i, e.j)).second)
      throw std::invalid_argument("Lattice: duplicate edge");
  }
  std::set<int> cell_set;
  for (int s : cell_) {
    if (s < 0 || s >= n) throw std::invalid_argument("Lattice: cell site out of range");
    if (!cell_set.insert(s).second) throw std::invalid_argument("Lattice: repeated cell site");
  }
  for (int c : connectors_) {
    if (c < 0 || c >= n) throw std::invalid_argument("Lattice: connector out of range");
    if (cell_set.count(c)) throw std::invalid_argument("Lattice: connector inside the localized cell");
  }
}

std::vector<int> Lattice::neighbors(int site) const {
  std::vector<int> out;
  for (const auto& e : edges_) {
    if (e.i == site) out.push_back(e.j);
    if (e.j == site) out.push_back(e.i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double Lattice::coupling(int a, int b) const {
  for (const auto& e : edges_)
    if ((e.i == a && e.j == b) || (e.i == b && e.j == a)) return e.kappa;
  return 0.0;
}

std::optional<int> Lattice::find_label(std::string_view label) const {
  for (const auto& s : sites_)
    if (s.label == label) return s.id;
  return std::nullopt;
}

Eigen::MatrixXd Lattice::single_particle_matrix() const {
  const int n = site_count();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (const auto& s : sites_) h(s.id, s.id) = s.epsilon;
  for (const auto& e : edges_) {
    h(e.i, e.j) -= e.kappa;
    h(e.j, e.i) -= e.kappa;
  }
  return h;
}

Lattice Lattice::localized_patch() const {
  std::vector<int> old_ids = cell_;
  old_ids.insert(old_ids.end(), connectors_.begin(), connectors_.end());
  std::vector<int> new_id(sites_.size(), -1);
  std::vector<Site> sites;
  for (std::size_t k = 0; k < old_ids.size(); ++k) {
    new_id[static_cast<std::size_t>(old_ids[k])] = static_cast<int>(k);
    Site s = sites_[static_cast<std::size_t>(old_ids[k])];
    s.id = static_cast<int>(k);
    sites.push_back(std::move(s));
  }
  std::vector<Edge> edges;
  for (const auto& e : edges_) {
    const int a = new_id[static_cast<std::size_t>(e.i)];
    const int b = new_id[static_cast<std::size_t>(e.j)];
    if (a >= 0 && b >= 0) edges.push_back({a, b, e.kappa});
  }
  std::vector<int> cell(cell_.size()), connectors;
  for (std::size_t k = 0; k < cell_.size(); ++k) cell[k] = static_cast<int>(k);
  for (std::size_t k = 0; k < connectors_.size(); ++k) connectors.push_back(static_cast<int>(cell_.size() + k));
  return Lattice(kind_, std::move(sites), std::move(edges), std::move(cell), std::move(connectors));
}

// ---------------------------------------------------------------------------

namespace {

std::vector<int> adjacent_outside(const std::vector<Edge>& edges, const std::vector<int>& cell) {
  std::set<int> inside(cell.begin(), cell.end()), out;
  for (const auto& e : edges) {
    if (inside.count(e.i) && !inside.count(e.j)) out.insert(e.j);
    if (inside.count(e.j) && !inside.count(e.i)) out.insert(e.i);
  }
  return {out.begin(), out.end()};
}

}  // namespace

Lattice build_lattice(LatticeKind kind, LatticeSize size, double kappa, double epsilon) {
  if (kind == LatticeKind::custom)
    throw std::invalid_argument("build_lattice: use build_custom_lattice for custom lattices");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("build_lattice: kappa must be positive");
  if (!std::isfinite(epsilon)) throw std::invalid_argument("build_lattice: epsilon must be finite");

  const UnitCell uc = unit_cell(kind);
  if (uc.dimension == 1) size.rows = 1;
  const int min_cols = kind == LatticeKind::stub ? 2 : kind == LatticeKind::lieb ? 2 : kind == LatticeKind::kagome ? 3 : 1;
  const int min_rows = uc.dimension == 1 ? 1 : min_cols;
  if (size.cols < min_cols || size.rows < min_rows)
    throw std::invalid_argument("build_lattice: patch too small for lattice kind " + std::string(to_string(kind)));

  const int nsub = static_cast<int>(uc.labels.size());
  auto id = [&](int sub, int i, int j) { return ((j * size.cols) + i) * nsub + sub; };

  std::vector<Site> sites;
  for (int j = 0; j < size.rows; ++j)
    for (int i = 0; i < size.cols; ++i)
      for (int s = 0; s < nsub; ++s) {
        std::string label = uc.labels[static_cast<std::size_t>(s)] + "[" + std::to_string(i);
        if (uc.dimension == 2) label += "," + std::to_string(j);
        sites.push_back({id(s, i, j), label + "]", epsilon});
      }

  std::vector<Edge> edges;
  for (int j = 0; j < size.rows; ++j)
    for (int i = 0; i < size.cols; ++i)
      for (const auto& hop : uc.hops) {
        const int ti = i + hop.offset[0];
        const int tj = j + hop.offset[1];
        if (ti < 0 || tj < 0 || ti >= size.cols || tj >= size.rows) continue;
        edges.push_back({id(hop.from, i, j), id(hop.to, ti, tj), kappa});
      }

  std::vector<int> cell;
  switch (kind) {
    case LatticeKind::rhomboidal:
    case LatticeKind::symmetric_rhomboidal: {
      const int n0 = size.cols / 2;
      cell = {id(0, n0, 0), id(1, n0, 0)};
      break;
    }
    case LatticeKind::stub: {
      const int n0 = std::min((size.cols - 1) / 2, size.cols - 2);
      cell = {id(0, n0, 0), id(2, n0, 0), id(0, n0 + 1, 0)};
      break;
    }
    case LatticeKind::lieb: {
      const int i0 = std::min((size.cols - 1) / 2, size.cols - 2);
      const int j0 = std::min((size.rows - 1) / 2, size.rows - 2);
      // plaquette edges in cyclic order: bottom, right, top, left
      cell = {id(1, i0, j0), id(2, i0 + 1, j0), id(1, i0, j0 + 1), id(2, i0, j0)};
      break;
    }
    case LatticeKind::kagome: {
      const int i0 = std::clamp((size.cols - 1) / 2, 1, size.cols - 2);
      const int j0 = std::clamp((size.rows - 1) / 2, 1, size.rows - 2);
      // hexagon sites in cyclic order
      cell = {id(1, i0, j0),     id(0, i0 + 1, j0), id(2, i0 + 1, j0),
              id(1, i0, j0 + 1), id(0, i0, j0 + 1), id(2, i0, j0)};
      break;
    }
    case LatticeKind::custom:
      break;
  }
  auto connectors = adjacent_outside(edges, cell);
  return Lattice(kind, std::move(sites), std::move(edges), std::move(cell), std::move(connectors), uc);
}

Lattice build_custom_lattice(std::vector<Site> sites, std::vector<Edge> edges, std::vector<int> cell,
                             std::optional<std::vector<int>> connectors) {
  std::vector<int> conn = connectors ? std::move(*connectors) : adjacent_outside(edges, cell);
  return Lattice(LatticeKind::custom, std::move(sites), std::move(edges), std::move(cell), std::move(conn));
}

// ---------------------------------------------------------------------------

std::vector<KPoint> k_grid(int dimension, int samples) {
  if (dimension < 1 || dimension > 2) throw std::invalid_argument("k_grid: dimension must be 1 or 2");
  if (samples < 2) throw std::invalid_argument("k_grid: need at least two samples per dimension");
  std::vector<double> axis(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s)
    axis[static_cast<std::size_t>(s)] = -std::numbers::pi + 2.0 * std::numbers::pi * s / (samples - 1);
  std::vector<KPoint> grid;
  if (dimension == 1) {
    for (double k : axis) grid.push_back({k, 0.0});
  } else {
    for (double kx : axis)
      for (double ky : axis) grid.push_back({kx, ky});
  }
  return grid;
}

Eigen::MatrixXcd bloch_matrix(const UnitCell& cell, double kappa, double epsilon, const KPoint& k) {
  const auto n = static_cast<Eigen::Index>(cell.labels.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(n, n) * epsilon;
  for (const auto& hop : cell.hops) {
    const double phase = k[0] * hop.offset[0] + k[1] * hop.offset[1];
    const std::complex<double> t = -kappa * std::polar(1.0, phase);
    h(hop.from, hop.to) += t;
    h(hop.to, hop.from) += std::conj(t);
  }
  return h;
}

BandStructure bloch_bands(const UnitCell& cell, double kappa, double epsilon, const std::vector<KPoint>& grid) {
  if (grid.empty()) throw std::invalid_argument("bloch_bands: empty k grid");
  BandStructure out;
  out.dimension = cell.dimension;
  out.k_samples = grid;
  out.bands.reserve(grid.size());
  for (const auto& k : grid) {
    for (double c : k)
      if (std::abs(c) > std::numbers::pi + 1e-12) throw std::invalid_argument("bloch_bands: k outside [-pi, pi]");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(bloch_matrix(cell, kappa, epsilon, k),
                                                           Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    out.bands.emplace_back(ev.data(), ev.data() + ev.size());
  }
  return out;
}

BandStructure bloch_bands(LatticeKind kind, double kappa, double epsilon, const std::vector<KPoint>& grid) {
  if (kind == LatticeKind::custom) throw std::invalid_argument("bloch_bands: custom lattices have no unit cell");
  return bloch_bands(unit_cell(kind), kappa, epsilon, grid);
}

std::optional<double> flat_band_frequency(const BandStructure& bands, double tol) {
  if (bands.bands.empty()) return std::nullopt;
  // Bands are followed by nearest frequency rather than by sorted index, so
  // a dispersive band crossing the flat one does not break the detection.
  for (double candidate : bands.bands.front()) {
    double lo = candidate, hi = candidate, sum = 0.0;
    for (const auto& sample : bands.bands) {
      const auto nearest = *std::min_element(sample.begin(), sample.end(), [&](double a, double b) {
        return std::abs(a - candidate) < std::abs(b - candidate);
      });
      lo = std::min(lo, nearest);
      hi = std::max(hi, nearest);
      sum += nearest;
    }
    if (hi - lo < tol) return sum / static_cast<double>(bands.bands.size());
  }
  return std::nullopt;
}

}  // namespace focklat
