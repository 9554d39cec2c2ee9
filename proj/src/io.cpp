#include "focklat/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace focklat {

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  return buf;
}

nlohmann::json state_to_json(const StateVector& state) {
  const auto& basis = *state.basis();
  nlohmann::json amps = nlohmann::json::array();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Complex a = state.amplitudes()[static_cast<Eigen::Index>(i)];
    if (a == Complex{}) continue;
    amps.push_back({{"occ", basis.state(i)}, {"re", a.real() == 0.0 ? 0.0 : a.real()},
                    {"im", a.imag() == 0.0 ? 0.0 : a.imag()}});
  }
  nlohmann::json j{{"modes", basis.modes()}, {"total", basis.max_total()}, {"amplitudes", amps}};
  if (basis.kind() == FockBasis::Kind::truncated) j["truncated"] = true;
  return j;
}

StateVector state_from_json(const nlohmann::json& j) {
  const int modes = j.at("modes").get<int>();
  const int total = j.at("total").get<int>();
  const bool truncated = j.value("truncated", false);
  auto basis = truncated ? FockBasis::truncated(modes, total) : FockBasis::fixed(modes, total);
  StateVector out(basis);
  for (const auto& a : j.at("amplitudes")) {
    const auto occ = a.at("occ").get<OccupationVector>();
    const auto idx = basis->index_of(occ);
    if (!idx) throw std::invalid_argument("state_from_json: occupation outside the declared basis");
    out.amplitudes()[static_cast<Eigen::Index>(*idx)] = Complex(a.at("re").get<double>(), a.at("im").get<double>());
  }
  return out;
}

nlohmann::json lattice_to_json(const Lattice& lattice) {
  nlohmann::json sites = nlohmann::json::array(), edges = nlohmann::json::array();
  for (const auto& s : lattice.sites()) sites.push_back({{"id", s.id}, {"label", s.label}, {"eps", s.epsilon}});
  for (const auto& e : lattice.edges()) edges.push_back({{"i", e.i}, {"j", e.j}, {"kappa", e.kappa}});
  nlohmann::json j{{"kind", std::string(to_string(lattice.kind()))},
                   {"sites", sites},
                   {"edges", edges},
                   {"connectors", lattice.connectors()},
                   {"localized", lattice.cell()}};
  if (const auto& uc = lattice.unit_cell()) {
    nlohmann::json offsets = nlohmann::json::array();
    for (const auto& h : uc->hops) offsets.push_back({h.from, h.to, h.offset[0], h.offset[1]});
    j["cell"] = {{"dimension", uc->dimension}, {"labels", uc->labels}, {"offsets", offsets}};
  }
  return j;
}

Lattice lattice_from_json(const nlohmann::json& j) {
  const auto kind = lattice_kind_from_string(j.at("kind").get<std::string>());
  std::vector<Site> sites;
  for (const auto& s : j.at("sites"))
    sites.push_back({s.at("id").get<int>(), s.value("label", std::string{}), s.value("eps", 0.0)});
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) edges.push_back({e.at("i").get<int>(), e.at("j").get<int>(), e.at("kappa").get<double>()});
  auto cell = j.at("localized").get<std::vector<int>>();
  if (kind == LatticeKind::custom) {
    std::optional<std::vector<int>> connectors;
    if (j.contains("connectors")) connectors = j.at("connectors").get<std::vector<int>>();
    return build_custom_lattice(std::move(sites), std::move(edges), std::move(cell), std::move(connectors));
  }
  std::optional<UnitCell> uc;
  if (j.contains("cell")) uc = unit_cell(kind);
  return Lattice(kind, std::move(sites), std::move(edges), std::move(cell), j.at("connectors").get<std::vector<int>>(),
                 std::move(uc));
}

void write_bands_csv(const BandStructure& bands, std::ostream& out) {
  out << (bands.dimension == 2 ? "kx,ky" : "k");
  for (std::size_t b = 0; b < bands.band_count(); ++b) out << ",band_" << b;
  out << '\n';
  for (std::size_t i = 0; i < bands.k_samples.size(); ++i) {
    out << format_number(bands.k_samples[i][0]);
    if (bands.dimension == 2) out << ',' << format_number(bands.k_samples[i][1]);
    for (double f : bands.bands[i]) out << ',' << format_number(f);
    out << '\n';
  }
}

}  // namespace focklat
