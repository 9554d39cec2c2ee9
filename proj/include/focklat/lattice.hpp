#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace focklat {

enum class LatticeKind { rhomboidal, symmetric_rhomboidal, stub, lieb, kagome, custom };

std::string_view to_string(LatticeKind kind);
/// Throws std::invalid_argument for unknown names.
LatticeKind lattice_kind_from_string(std::string_view name);

struct Site {
  int id = 0;
  std::string label;
  double epsilon = 0.0;  ///< propagation constant, 1/length
};

struct Edge {
  int i = 0;
  int j = 0;
  double kappa = 1.0;  ///< coupling constant, 1/length
};

/// Hop from sublattice `from` in cell 0 to sublattice `to` in cell `offset`.
struct CellHop {
  int from = 0;
  int to = 0;
  std::array<int, 2> offset{0, 0};
};

/// Translation-invariant description used both to tile finite lattices and to
/// build Bloch Hamiltonians. Every hop carries the same coupling kappa.
struct UnitCell {
  int dimension = 1;
  std::vector<std::string> labels;
  std::vector<CellHop> hops;
};

UnitCell unit_cell(LatticeKind kind);

/// Finite patch size: `cols` cells along the first lattice vector, `rows`
/// along the second (1D lattices use rows = 1).
struct LatticeSize {
  int cols = 1;
  int rows = 1;
};

LatticeSize default_size(LatticeKind kind);

/// Finite waveguide array: sites, undirected edges stored once, the
/// designated localized-state cell (ordered as the localized-state formulas
/// expect), and the connector sites adjacent to that cell.
class Lattice {
 public:
  Lattice(LatticeKind kind, std::vector<Site> sites, std::vector<Edge> edges, std::vector<int> cell,
          std::vector<int> connectors, std::optional<UnitCell> unit_cell = std::nullopt);

  LatticeKind kind() const { return kind_; }
  int site_count() const { return static_cast<int>(sites_.size()); }
  const std::vector<Site>& sites() const { return sites_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& cell() const { return cell_; }
  const std::vector<int>& connectors() const { return connectors_; }
  const std::optional<UnitCell>& unit_cell() const { return unit_cell_; }

  std::vector<int> neighbors(int site) const;
  int degree(int site) const { return static_cast<int>(neighbors(site).size()); }
  /// Coupling between two sites, 0 when not connected.
  double coupling(int a, int b) const;
  std::optional<int> find_label(std::string_view label) const;

  /// Single-photon matrix: epsilon on the diagonal, -kappa per edge.
  Eigen::MatrixXd single_particle_matrix() const;

  /// Induced sub-lattice on cell + connectors, sites renumbered in the order
  /// cell first, then connectors.
  Lattice localized_patch() const;

 private:
  LatticeKind kind_;
  std::vector<Site> sites_;
  std::vector<Edge> edges_;
  std::vector<int> cell_;
  std::vector<int> connectors_;
  std::optional<UnitCell> unit_cell_;
};

/// Builds a finite lattice with open boundaries. Rhomboidal-type lattices need
/// cols >= 1, stub cols >= 2, Lieb cols, rows >= 2 and Kagome cols, rows >= 3
/// so that the designated cell has its full set of connectors.
Lattice build_lattice(LatticeKind kind, LatticeSize size, double kappa = 1.0, double epsilon = 0.0);

/// Custom lattice from explicit sites and edges. Connectors default to every
/// site adjacent to the cell.
Lattice build_custom_lattice(std::vector<Site> sites, std::vector<Edge> edges, std::vector<int> cell,
                             std::optional<std::vector<int>> connectors = std::nullopt);

using KPoint = std::array<double, 2>;

struct BandStructure {
  int dimension = 1;
  std::vector<KPoint> k_samples;
  std::vector<std::vector<double>> bands;  ///< per k-sample, ascending

  std::size_t band_count() const { return bands.empty() ? 0 : bands.front().size(); }
};

/// Uniform grid over [-pi, pi] with `samples` points per dimension.
std::vector<KPoint> k_grid(int dimension, int samples);

Eigen::MatrixXcd bloch_matrix(const UnitCell& cell, double kappa, double epsilon, const KPoint& k);

BandStructure bloch_bands(const UnitCell& cell, double kappa, double epsilon, const std::vector<KPoint>& grid);
/// Throws std::invalid_argument for custom lattices (no unit cell).
BandStructure bloch_bands(LatticeKind kind, double kappa, double epsilon, const std::vector<KPoint>& grid);

/// Mean frequency of the first band whose spread over k is below `tol`.
std::optional<double> flat_band_frequency(const BandStructure& bands, double tol);

}  // namespace focklat
