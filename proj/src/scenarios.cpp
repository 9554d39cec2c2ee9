#include "focklat/scenarios.hpp"

#include "focklat/hamiltonian.hpp"
#include "focklat/io.hpp"
#include "focklat/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace focklat {

namespace {

constexpr double kDiamondHalfWidth = 20.0;  // micrometers
constexpr double kGroupRadius = 80.0;

int resolve_core(const FiberLayout& layout, const nlohmann::json& ref) {
  if (ref.is_number_integer()) return ref.get<int>();
  if (ref.is_string()) {
    const auto id = ref.get<std::string>();
    for (std::size_t i = 0; i < layout.cores.size(); ++i)
      if (layout.cores[i].id == id) return static_cast<int>(i);
    throw std::invalid_argument("layout: unknown core id '" + id + "'");
  }
  throw std::invalid_argument("layout: core reference must be an index or an id");
}

void append_group(FiberLayout& out, const std::string& prefix, double cx, double cy, double kappa, double diagonal) {
  const int base = out.core_count();
  const double d = kDiamondHalfWidth;
  out.cores.push_back({prefix + "A", cx, cy + d});
  out.cores.push_back({prefix + "B", cx, cy - d});
  out.cores.push_back({prefix + "S'", cx - d, cy});
  out.cores.push_back({prefix + "S", cx + d, cy});
  const int a = base, b = base + 1, sp = base + 2, s = base + 3;
  for (auto [i, j] : {std::pair{a, sp}, {a, s}, {b, sp}, {b, s}}) out.couplings.push_back({i, j, kappa});
  const auto kind = diagonal > 0.0 ? LatticeKind::symmetric_rhomboidal : LatticeKind::rhomboidal;
  if (diagonal > 0.0) {
    out.couplings.push_back({a, b, diagonal});
    out.couplings.push_back({sp, s, diagonal});
  }
  out.channels.push_back({prefix + "AB", make_spec(kind, {a, b})});
  out.channels.push_back({prefix + "S'S", make_spec(kind, {sp, s})});
}

std::vector<int> outside(const std::vector<int>& support, int modes) {
  std::vector<int> out;
  for (int m = 0; m < modes; ++m)
    if (!std::binary_search(support.begin(), support.end(), m)) out.push_back(m);
  return out;
}

}  // namespace

void FiberLayout::validate() const {
  const int n = core_count();
  std::set<std::string> ids;
  for (const auto& c : cores)
    if (!ids.insert(c.id).second) throw std::invalid_argument("layout: duplicate core id '" + c.id + "'");
  if (!std::isfinite(epsilon)) throw std::invalid_argument("layout: epsilon must be finite");
  std::set<std::pair<int, int>> pairs;
  for (const auto& c : couplings) {
    if (c.i < 0 || c.j < 0 || c.i >= n || c.j >= n) throw std::invalid_argument("layout: coupling core out of range");
    if (c.i == c.j) throw std::invalid_argument("layout: a core cannot couple to itself");
    if (!(c.kappa >= 0.0) || !std::isfinite(c.kappa)) throw std::invalid_argument("layout: couplings must be finite and >= 0");
    if (!pairs.emplace(std::min(c.i, c.j), std::max(c.i, c.j)).second)
      throw std::invalid_argument("layout: repeated coupling between cores " + std::to_string(c.i) + " and " +
                                  std::to_string(c.j));
  }
  std::set<int> used;
  for (const auto& ch : channels) {
    if (ch.spec.modes.empty()) throw std::invalid_argument("layout: channel '" + ch.name + "' has no cores");
    for (int m : ch.spec.modes) {
      if (m < 0 || m >= n) throw std::invalid_argument("layout: channel '" + ch.name + "' core out of range");
      if (!used.insert(m).second)
        throw std::invalid_argument("layout: channel '" + ch.name + "' overlaps another channel at core " +
                                    std::to_string(m));
    }
  }
}

Eigen::MatrixXd FiberLayout::coupling_matrix() const {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(core_count(), core_count());
  for (const auto& c : couplings) k(c.i, c.j) = k(c.j, c.i) = c.kappa;
  return k;
}

FiberLayout FiberLayout::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("layout: scale factor must be positive");
  FiberLayout out = *this;
  for (auto& c : out.couplings) c.kappa *= factor;
  return out;
}

Lattice FiberLayout::to_lattice() const {
  validate();
  std::vector<Site> sites;
  for (int i = 0; i < core_count(); ++i) sites.push_back({i, cores[static_cast<std::size_t>(i)].id, epsilon});
  std::vector<Edge> edges;
  for (const auto& c : couplings)
    if (c.kappa > 0.0) edges.push_back({c.i, c.j, c.kappa});
  std::vector<int> cell = channels.empty() ? std::vector<int>{} : channels.front().spec.modes;
  return Lattice(LatticeKind::custom, std::move(sites), std::move(edges), std::move(cell), {});
}

FiberLayout four_core_layout(double kappa, double diagonal, double epsilon) {
  if (!(kappa > 0.0)) throw std::invalid_argument("four_core_layout: kappa must be positive");
  FiberLayout out;
  out.name = "four-core";
  out.epsilon = epsilon;
  append_group(out, "", 0.0, 0.0, kappa, diagonal);
  return out;
}

FiberLayout grouped_layout(int groups, double kappa, double diagonal, double epsilon) {
  if (groups < 1) throw std::invalid_argument("grouped_layout: need at least one group");
  if (!(kappa > 0.0)) throw std::invalid_argument("grouped_layout: kappa must be positive");
  FiberLayout out;
  out.name = std::to_string(4 * groups) + "-core";
  out.epsilon = epsilon;
  for (int g = 0; g < groups; ++g) {
    const double phi = 2.0 * std::numbers::pi * g / groups;
    const double r = groups == 1 ? 0.0 : kGroupRadius;
    append_group(out, "g" + std::to_string(g) + ".", r * std::cos(phi), r * std::sin(phi), kappa, diagonal);
  }
  return out;
}

FiberLayout sixteen_core_layout(double kappa, double diagonal) { return grouped_layout(4, kappa, diagonal); }
FiberLayout hexagonal_ring_layout(double kappa, double diagonal) { return grouped_layout(6, kappa, diagonal); }

nlohmann::json layout_to_json(const FiberLayout& layout) {
  nlohmann::json j;
  j["name"] = layout.name;
  j["epsilon"] = layout.epsilon;
  j["cores"] = nlohmann::json::array();
  for (const auto& c : layout.cores) j["cores"].push_back({{"id", c.id}, {"x", c.x}, {"y", c.y}});
  j["couplings"] = nlohmann::json::array();
  for (const auto& c : layout.couplings) j["couplings"].push_back({c.i, c.j, c.kappa});
  j["channels"] = nlohmann::json::array();
  for (const auto& ch : layout.channels)
    j["channels"].push_back({{"name", ch.name}, {"kind", std::string(to_string(ch.spec.kind))}, {"cores", ch.spec.modes}});
  return j;
}

FiberLayout layout_from_json(const nlohmann::json& j) {
  FiberLayout out;
  try {
    out.name = j.value("name", std::string{});
    out.epsilon = j.value("epsilon", 0.0);
    for (const auto& c : j.at("cores")) out.cores.push_back({c.at("id").get<std::string>(), c.value("x", 0.0), c.value("y", 0.0)});
    for (const auto& c : j.value("couplings", nlohmann::json::array())) {
      if (!c.is_array() || c.size() != 3) throw std::invalid_argument("layout: couplings are [i, j, kappa] triples");
      out.couplings.push_back({resolve_core(out, c[0]), resolve_core(out, c[1]), c[2].get<double>()});
    }
    for (const auto& ch : j.value("channels", nlohmann::json::array())) {
      std::vector<int> modes;
      for (const auto& ref : ch.at("cores")) modes.push_back(resolve_core(out, ref));
      const auto kind = lattice_kind_from_string(ch.value("kind", std::string("rhomboidal")));
      out.channels.push_back({ch.value("name", std::string{}), make_spec(kind, std::move(modes))});
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("layout: malformed JSON: ") + e.what());
  }
  out.validate();
  return out;
}

StateVector channel_state(const FiberLayout& layout, std::size_t channel, int photons, const BasisPtr& basis) {
  if (channel >= layout.channels.size()) throw std::invalid_argument("channel_state: channel index out of range");
  if (basis->modes() != layout.core_count()) throw std::invalid_argument("channel_state: basis does not span the layout");
  return localized_state(layout.channels[channel].spec, photons, basis);
}

double CrosstalkScan::max_leakage() const {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, r.leakage);
  return m;
}

void CrosstalkScan::write_csv(std::ostream& out) const {
  out << "z,leakage";
  for (const auto& n : channel_names) out << ",pop_" << n;
  out << ",fidelity\n";
  for (const auto& r : records) {
    out << format_number(r.z) << ',' << format_number(r.leakage);
    for (double p : r.channel_populations) out << ',' << format_number(p);
    out << ',' << format_number(r.fidelity) << '\n';
  }
}

CrosstalkScan crosstalk_scan(const FiberLayout& layout, const StateVector& input, std::span<const double> z_grid) {
  const Lattice lat = layout.to_lattice();
  if (input.basis()->modes() != layout.core_count())
    throw std::invalid_argument("crosstalk_scan: input does not live on the layout's cores");
  CrosstalkScan scan;
  for (const auto& ch : layout.channels) scan.channel_names.push_back(ch.name);
  const auto pops = input.normalized().mode_populations();
  for (int m = 0; m < layout.core_count(); ++m)
    if (pops[static_cast<std::size_t>(m)] > 1e-14) scan.input_support.push_back(m);
  const auto leak = outside(scan.input_support, layout.core_count());

  const Propagator prop(build_hamiltonian(lat, input.basis()));
  const auto traj = evolve_trajectory(prop, input.normalized(), z_grid, leak);
  for (const auto& r : traj.records) {
    CrosstalkRecord c;
    c.z = r.z;
    c.leakage = r.leakage;
    c.fidelity = r.fidelity;
    for (const auto& ch : layout.channels) {
      double p = 0.0;
      for (int m : ch.spec.modes) p += r.populations[static_cast<std::size_t>(m)];
      c.channel_populations.push_back(p);
    }
    scan.records.push_back(std::move(c));
  }
  return scan;
}

ChannelBudget channel_budget(const FiberLayout& layout) {
  layout.validate();
  ChannelBudget b;
  b.cores = layout.core_count();
  b.channels = static_cast<int>(layout.channels.size());
  b.ratio = b.cores == 0 ? 0.0 : static_cast<double>(b.channels) / b.cores;
  return b;
}

QubitChannelResult qubit_channel_fidelity(const FiberLayout& layout, Complex alpha, Complex beta, double z,
                                          double gamma, std::size_t first, std::size_t second) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10)
    throw std::invalid_argument("qubit_channel_fidelity: |alpha|^2 + |beta|^2 must be 1");
  if (first == second) throw std::invalid_argument("qubit_channel_fidelity: channels must differ");
  const Lattice lat = layout.to_lattice();
  const auto basis = FockBasis::truncated(layout.core_count(), 1);
  const auto h = build_hamiltonian(lat, basis);
  const auto p0 = channel_state(layout, first, 1, basis), p1 = channel_state(layout, second, 1, basis);
  const StateVector input(basis, alpha * p0.amplitudes() + beta * p1.amplitudes());
  const auto out = Propagator(h).apply(input, z);

  const double l0 = h.expectation(p0).real(), l1 = h.expectation(p1).real();
  const Eigen::VectorXcd target = alpha * std::polar(1.0, -l0 * z) * p0.amplitudes() +
                                  beta * std::polar(1.0, -l1 * z) * p1.amplitudes();

  std::vector<int> used = layout.channels[first].spec.modes;
  used.insert(used.end(), layout.channels[second].spec.modes.begin(), layout.channels[second].spec.modes.end());
  std::sort(used.begin(), used.end());

  QubitChannelResult res;
  res.leakage = out.population_on(outside(used, layout.core_count()));
  std::vector<int> all(static_cast<std::size_t>(layout.core_count()));
  for (int i = 0; i < layout.core_count(); ++i) all[static_cast<std::size_t>(i)] = i;
  const auto branches = loss_branches(DensityMatrix::pure(out), all, gamma);
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(target.size(), target.size());
  for (const auto& b : branches) total += b.matrix;
  res.fidelity = target.dot(total * target).real();
  res.no_loss_weight = branches.front().trace().real();
  if (res.no_loss_weight > 0.0) res.no_loss_fidelity = target.dot(branches.front().matrix * target).real() / res.no_loss_weight;
  return res;
}

bool channel_is_protected(const FiberLayout& layout, std::size_t channel, int photons, std::span<const double> z_grid,
                          double tol) {
  const auto basis = FockBasis::fixed(layout.core_count(), photons);
  const auto scan = crosstalk_scan(layout, channel_state(layout, channel, photons, basis), z_grid);
  return scan.max_leakage() < tol;
}

}  // namespace focklat
