#pragma once

#include "focklat/evolution.hpp"
#include "focklat/lattice.hpp"
#include "focklat/states.hpp"

#include "json.hpp"

#include <Eigen/Dense>

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace focklat {

struct Core {
  std::string id;
  double x = 0.0;  ///< micrometers, informational only
  double y = 0.0;
};

struct Coupling {
  int i = 0;
  int j = 0;
  double kappa = 0.0;
};

/// A localized-state channel on a set of cores; spec.modes are core indices.
struct ChannelDef {
  std::string name;
  LocalizedStateSpec spec;
};

/// Multi-core fiber cross-section. Dynamics depend only on the couplings and
/// the common propagation constant.
struct FiberLayout {
  std::string name;
  double epsilon = 0.0;
  std::vector<Core> cores;
  std::vector<Coupling> couplings;
  std::vector<ChannelDef> channels;

  /// Throws std::invalid_argument on bad core indices, self or repeated
  /// couplings, negative kappa, unknown ids, or channels sharing a core.
  void validate() const;

  int core_count() const { return static_cast<int>(cores.size()); }
  /// Symmetric, zero diagonal.
  Eigen::MatrixXd coupling_matrix() const;
  /// Every coupling multiplied by `factor`.
  FiberLayout scaled(double factor) const;
  /// Custom lattice with one site per core and one edge per nonzero coupling.
  Lattice to_lattice() const;
};

/// Cores A, B, S', S at the corners of a diamond with the four rhomboidal
/// couplings A-S', A-S, B-S', B-S. `diagonal` > 0 adds the A-B and S'-S
/// couplings (symmetric rhomboidal). Channels (A,B) and (S',S).
FiberLayout four_core_layout(double kappa = 1.0, double diagonal = 0.0, double epsilon = 0.0);

/// `groups` copies of the four-core layout on a ring, without coupling
/// between groups. 4 groups reproduce the sixteen-core design, 6 the
/// hexagonal ring.
FiberLayout grouped_layout(int groups, double kappa = 1.0, double diagonal = 0.0, double epsilon = 0.0);
FiberLayout sixteen_core_layout(double kappa = 1.0, double diagonal = 0.0);
FiberLayout hexagonal_ring_layout(double kappa = 1.0, double diagonal = 0.0);

/// {name, epsilon, cores:[{id,x,y}], couplings:[[i,j,kappa]],
///  channels:[{name, kind, cores:[...]}]}. Cores in couplings and channels
/// may be given by index or by id.
nlohmann::json layout_to_json(const FiberLayout& layout);
FiberLayout layout_from_json(const nlohmann::json& j);

/// |psi_N> of one channel on `basis` (which spans all cores).
StateVector channel_state(const FiberLayout& layout, std::size_t channel, int photons, const BasisPtr& basis);

struct CrosstalkRecord {
  double z = 0.0;
  double leakage = 0.0;                     ///< photons outside the input's support
  std::vector<double> channel_populations;  ///< photons on each channel's cores
  double fidelity = 0.0;                    ///< |<input|psi(z)>|^2
};

struct CrosstalkScan {
  std::vector<std::string> channel_names;
  std::vector<int> input_support;
  std::vector<CrosstalkRecord> records;

  double max_leakage() const;
  /// `z,leakage,<channel names...>,fidelity`
  void write_csv(std::ostream& out) const;
};

/// Propagates `input` (any basis over the layout's cores) under the layout
/// Hamiltonian.
CrosstalkScan crosstalk_scan(const FiberLayout& layout, const StateVector& input, std::span<const double> z_grid);

struct ChannelBudget {
  int cores = 0;
  int channels = 0;
  double ratio = 0.0;  ///< channels per core, 0 for an empty layout
};

/// Validates the layout (overlaps rejected) and counts its channels.
ChannelBudget channel_budget(const FiberLayout& layout);

struct QubitChannelResult {
  double fidelity = 0.0;          ///< with the ideal phase-evolved target, all loss branches
  double no_loss_weight = 0.0;    ///< weight of the branch without photon loss
  double no_loss_fidelity = 0.0;  ///< of that branch, normalized
  double leakage = 0.0;           ///< photons outside the two channels
};

/// alpha |psi_1> on `first` plus beta |psi_1> on `second`, propagated to z,
/// then damped on every core with `gamma`. The target evolves each term by
/// the phase exp(-i <H> z) of its channel.
QubitChannelResult qubit_channel_fidelity(const FiberLayout& layout, Complex alpha, Complex beta, double z,
                                          double gamma, std::size_t first = 0, std::size_t second = 1);

/// True when |psi_N> of the channel leaks less than `tol` photons out of its
/// cores at every z of the grid.
bool channel_is_protected(const FiberLayout& layout, std::size_t channel, int photons, std::span<const double> z_grid,
                          double tol = 1e-12);

}  // namespace focklat
