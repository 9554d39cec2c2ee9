#include "focklat/cli.hpp"

#include "focklat/combinatorics.hpp"
#include "focklat/entanglement.hpp"
#include "focklat/evolution.hpp"
#include "focklat/hamiltonian.hpp"
#include "focklat/io.hpp"
#include "focklat/losses.hpp"
#include "focklat/parallel.hpp"
#include "focklat/scenarios.hpp"
#include "focklat/states.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace focklat::cli {

namespace {

using json = nlohmann::json;

// Floating values go out as 15-digit decimal strings so JSON artifacts are
// byte-stable across platforms.
json num(double v) { return format_number(v); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

CommandResult ok(std::string artifact) {
  CommandResult r;
  r.artifact = std::move(artifact);
  return r;
}

PhotonRange photons_or(const RunConfig& c, PhotonRange fallback) { return c.photons.value_or(fallback); }

int single_photons(const RunConfig& c, int fallback) {
  const auto r = photons_or(c, {fallback, fallback});
  if (!r.single()) throw std::invalid_argument(c.subcommand + ": --photons takes a single value");
  return r.first;
}

std::vector<int> photon_list(const PhotonRange& r) {
  std::vector<int> out;
  for (int n = r.first; n <= r.last; ++n) out.push_back(n);
  return out;
}

LatticeKind kind_of(const RunConfig& c) { return lattice_kind_from_string(c.lattice); }

// 1D lattices at their default size, 2D lattices on the cell + connector patch.
Lattice verification_lattice(const RunConfig& c) {
  const auto kind = kind_of(c);
  auto lat = build_lattice(kind, default_size(kind), c.kappa, c.epsilon);
  return unit_cell(kind).dimension == 1 ? lat : lat.localized_patch();
}

std::vector<std::string> cell_labels(const Lattice& lat) {
  std::vector<std::string> out;
  for (int s : lat.cell()) out.push_back(lat.sites()[static_cast<std::size_t>(s)].label);
  return out;
}

LocalizedStateSpec cell_spec(LatticeKind kind) {
  std::vector<int> modes(static_cast<std::size_t>(catalog_cell_size(kind)));
  for (std::size_t i = 0; i < modes.size(); ++i) modes[i] = static_cast<int>(i);
  return make_spec(kind, modes);
}

json trajectory_json(const Trajectory& t) {
  json records = json::array();
  for (const auto& r : t.records) {
    json pops = json::array();
    for (double p : r.populations) pops.push_back(num(p));
    records.push_back({{"z", num(r.z)}, {"fidelity", num(r.fidelity)}, {"leakage", num(r.leakage)}, {"populations", pops}});
  }
  return records;
}

// --- subcommands -------------------------------------------------------------

CommandResult cmd_bands(const RunConfig& c) {
  const auto kind = kind_of(c);
  const auto grid = k_grid(unit_cell(kind).dimension, c.ksamples);
  const auto bands = bloch_bands(kind, c.kappa, c.epsilon, grid);
  const auto fb = flat_band_frequency(bands, 1e-10 * c.kappa);
  if (c.format == "csv") {
    std::ostringstream os;
    write_bands_csv(bands, os);
    return ok(os.str());
  }
  json j{{"lattice", c.lattice}, {"kappa", num(c.kappa)}, {"epsilon", num(c.epsilon)}, {"dimension", bands.dimension}};
  j["flat_band_frequency"] = fb ? num(*fb) : json(nullptr);
  j["flat_band_relative"] = fb ? num(*fb - c.epsilon) : json(nullptr);
  json samples = json::array();
  for (std::size_t i = 0; i < bands.k_samples.size(); ++i) {
    json k = json::array({num(bands.k_samples[i][0])});
    if (bands.dimension == 2) k.push_back(num(bands.k_samples[i][1]));
    json f = json::array();
    for (double v : bands.bands[i]) f.push_back(num(v));
    samples.push_back({{"k", k}, {"frequencies", f}});
  }
  j["bands"] = samples;
  return ok(dump(j));
}

CommandResult cmd_state(const RunConfig& c) {
  const auto kind = kind_of(c);
  const auto lat = verification_lattice(c);
  const auto labels = cell_labels(lat);
  const auto spec = cell_spec(kind);
  const int modes = static_cast<int>(spec.modes.size());
  const auto range = photons_or(c, {1, 1});
  if (c.format == "csv") {
    std::ostringstream os;
    os << "N";
    for (const auto& l : labels) os << ",n_" << l;
    os << ",re,im\n";
    for (int n : photon_list(range)) {
      const auto psi = localized_state(spec, n, FockBasis::fixed(modes, n));
      for (std::size_t i = 0; i < psi.size(); ++i) {
        const Complex a = psi.amplitudes()[static_cast<Eigen::Index>(i)];
        if (a == Complex{}) continue;
        os << n;
        for (int o : psi.basis()->state(i)) os << ',' << o;
        os << ',' << format_number(a.real()) << ',' << format_number(a.imag()) << '\n';
      }
    }
    return ok(os.str());
  }
  json states = json::array();
  for (int n : photon_list(range)) {
    const auto psi = localized_state(spec, n, FockBasis::fixed(modes, n));
    json amps = json::array();
    for (std::size_t i = 0; i < psi.size(); ++i) {
      const Complex a = psi.amplitudes()[static_cast<Eigen::Index>(i)];
      if (a == Complex{}) continue;
      amps.push_back({{"occ", psi.basis()->state(i)}, {"re", num(a.real())}, {"im", num(a.imag())}});
    }
    states.push_back({{"photons", n},
                      {"eigenvalue", num((c.epsilon + spec.fb_eigenvalue_coeff * c.kappa) * n)},
                      {"amplitudes", amps}});
  }
  return ok(dump({{"lattice", c.lattice}, {"cell", labels}, {"states", states}}));
}

struct Check {
  int photons = 0;
  std::string invariant;
  double value = 0.0;
  double threshold = 0.0;
  bool pass() const { return value < threshold; }
};

CommandResult cmd_verify(const RunConfig& c) {
  const auto lat = verification_lattice(c);
  const auto spec = catalog_spec(lat);
  const auto ns = photon_list(photons_or(c, {0, 6}));
  const auto per_n = parallel_map(ns.size(), [&](std::size_t idx) {
    const int n = ns[idx];
    const auto basis = FockBasis::fixed(lat.site_count(), n);
    const auto psi = localized_state(spec, n, basis);
    std::vector<Check> checks;
    checks.push_back({n, "norm", std::abs(psi.norm() - 1.0), c.tolerance});
    double worst = 0.0;
    for (int s : lat.connectors()) worst = std::max(worst, connector_operator(lat, basis, s).apply(psi).norm());
    checks.push_back({n, "annihilation", worst, c.tolerance});
    const double lambda = spec.fb_eigenvalue_coeff * c.kappa * n;
    const auto h = build_interaction(lat, basis);
    checks.push_back({n, "eigenrelation", (h.apply(psi).amplitudes() - lambda * psi.amplitudes()).norm(), 100.0 * c.tolerance});
    return checks;
  });
  std::vector<Check> checks;
  for (const auto& v : per_n) checks.insert(checks.end(), v.begin(), v.end());

  CommandResult res;
  const Check* failed = nullptr;
  for (const auto& ch : checks)
    if (!ch.pass()) {
      failed = &ch;
      break;
    }
  if (c.format == "csv") {
    std::ostringstream os;
    os << "N,invariant,value,threshold,pass\n";
    for (const auto& ch : checks)
      os << ch.photons << ',' << ch.invariant << ',' << format_number(ch.value) << ',' << format_number(ch.threshold) << ','
         << (ch.pass() ? "true" : "false") << '\n';
    res.artifact = os.str();
  } else {
    json arr = json::array();
    for (const auto& ch : checks)
      arr.push_back({{"photons", ch.photons}, {"invariant", ch.invariant}, {"value", num(ch.value)},
                     {"threshold", num(ch.threshold)}, {"pass", ch.pass()}});
    res.artifact = dump({{"lattice", c.lattice}, {"sites", lat.site_count()}, {"connectors", lat.connectors()},
                         {"checks", arr}, {"passed", failed == nullptr}});
  }
  if (failed) {
    res.exit_code = kExitVerification;
    res.error = json{{"kind", "verification"}, {"invariant", failed->invariant}, {"photons", failed->photons},
                     {"value", num(failed->value)}, {"threshold", num(failed->threshold)},
                     {"message", "invariant '" + failed->invariant + "' violated at N = " + std::to_string(failed->photons)}};
  }
  return res;
}

CommandResult cmd_evolve(const RunConfig& c) {
  const auto kind = kind_of(c);
  const int n = single_photons(c, 2);
  const auto lat = build_lattice(kind, default_size(kind), c.kappa, c.epsilon);
  const auto basis = FockBasis::fixed(lat.site_count(), n);
  StateVector psi(basis);
  if (c.input == "localized") {
    psi = localized_state(catalog_spec(lat), n, basis);
  } else {
    OccupationVector occ(static_cast<std::size_t>(lat.site_count()), 0);
    occ[static_cast<std::size_t>(lat.cell().front())] = n;
    psi = StateVector::fock(basis, occ);
  }
  const auto grid = uniform_grid(c.zmax.value_or(20.0 / c.kappa), c.zsteps.value_or(101));
  const Propagator prop(build_hamiltonian(lat, basis));
  const auto traj = evolve_trajectory(prop, psi, grid, lat.connectors());
  if (c.format == "csv") {
    std::ostringstream os;
    traj.write_csv(os);
    return ok(os.str());
  }
  double max_leak = 0.0, min_fid = 1.0;
  for (const auto& r : traj.records) {
    max_leak = std::max(max_leak, r.leakage);
    min_fid = std::min(min_fid, r.fidelity);
  }
  json labels = json::array();
  for (const auto& s : lat.sites()) labels.push_back(s.label);
  return ok(dump({{"lattice", c.lattice}, {"photons", n}, {"input", c.input}, {"dimension", basis->size()},
                {"dense", prop.dense()}, {"sites", labels}, {"connectors", lat.connectors()},
                {"max_leakage", num(max_leak)}, {"min_fidelity", num(min_fid)}, {"records", trajectory_json(traj)}}));
}

CommandResult cmd_prepare(const RunConfig& c) {
  const auto kind = kind_of(c);
  if (kind != LatticeKind::rhomboidal && kind != LatticeKind::stub)
    throw std::invalid_argument("prepare: lattice must be rhomboidal or stub");
  const int n = single_photons(c, 1);
  const auto grid = uniform_grid(c.zmax.value_or(2.0 * std::numbers::pi / c.kappa), c.zsteps.value_or(400));
  const auto res = prepare(kind, n, grid, c.kappa);
  if (c.format == "csv") {
    std::ostringstream os;
    os << "z,probability,input_population\n";
    for (const auto& r : res.trajectory.records)
      os << format_number(r.z) << ',' << format_number(r.fidelity) << ',' << format_number(r.leakage) << '\n';
    return ok(os.str());
  }
  const auto lat = build_lattice(kind, default_size(kind), c.kappa, c.epsilon);
  const auto pipe = preparation_pipeline(lat, n, uniform_grid(20.0 / c.kappa, 41));
  json records = json::array();
  for (const auto& r : res.trajectory.records)
    records.push_back({{"z", num(r.z)}, {"probability", num(r.fidelity)}, {"input_population", num(r.leakage)}});
  const double analytic = std::numbers::pi / (2.0 * std::sqrt(static_cast<double>(res.cell_size)) * c.kappa);
  return ok(dump({{"lattice", c.lattice},
                {"photons", n},
                {"coupling_length", num(res.coupling_length)},
                {"analytic_coupling_length", num(analytic)},
                {"grid_peak_z", num(res.grid_peak_z)},
                {"peak_probability", num(res.peak_probability)},
                {"pipeline",
                 {{"discarded_weight", num(pipe.discarded_weight)},
                  {"phase_fidelity", num(pipe.phase_fidelity)},
                  {"max_leakage", num(pipe.max_leakage)},
                  {"min_lattice_fidelity", num(pipe.min_lattice_fidelity)}}},
                {"records", records}}));
}

CommandResult cmd_entangle(const RunConfig& c) {
  const auto kind = kind_of(c);
  const auto spec = cell_spec(kind);
  const int modes = static_cast<int>(spec.modes.size());
  const bool ph = modes >= 3;
  const auto ns = photon_list(photons_or(c, {1, 12}));
  struct Row {
    int n;
    double neg, conc, conc_norm, ph_min;
  };
  const auto rows = parallel_map(ns.size(), [&](std::size_t i) {
    const int n = ns[i];
    const auto psi = localized_state(spec, n, FockBasis::fixed(modes, n));
    const int a[] = {0};
    Row r{n, negativity(psi, a, 0).value, concurrence(psi, a), concurrence(psi, a, true), 0.0};
    if (ph && n > 0) {
      const int ab[] = {0, 1};
      r.ph_min = ph_test(partial_trace(psi, ab), a);
    }
    return r;
  });
  if (c.format == "csv") {
    std::ostringstream os;
    os << "N,negativity,concurrence,concurrence_normalized" << (ph ? ",ph_min_eigenvalue" : "") << '\n';
    for (const auto& r : rows) {
      os << r.n << ',' << format_number(r.neg) << ',' << format_number(r.conc) << ',' << format_number(r.conc_norm);
      if (ph) os << ',' << format_number(r.ph_min);
      os << '\n';
    }
    return ok(os.str());
  }
  json arr = json::array();
  for (const auto& r : rows) {
    json row{{"photons", r.n}, {"negativity", num(r.neg)}, {"concurrence", num(r.conc)}, {"concurrence_normalized", num(r.conc_norm)}};
    if (ph) row["ph_min_eigenvalue"] = num(r.ph_min);
    arr.push_back(row);
  }
  return ok(dump({{"lattice", c.lattice}, {"bipartition", "first cell site | rest"}, {"rows", arr}}));
}

CommandResult cmd_monogamy(const RunConfig& c) {
  const auto ns = photon_list(photons_or(c, {1, 6}));
  for (int n : ns)
    if (n < 1) throw std::invalid_argument("monogamy: photons must be at least 1");
  struct Row {
    MonogamyReport rep;
    DecompositionSpread spread;
  };
  const auto rows = parallel_map(ns.size(), [&](std::size_t i) {
    Row r{monogamy(ns[i]), {}};
    if (c.samples > 0) r.spread = sample_decomposition_spread(ns[i], c.samples, c.seed + static_cast<std::uint64_t>(ns[i]));
    return r;
  });
  const bool spread = c.samples > 0;
  if (c.format == "csv") {
    std::ostringstream os;
    os << "N,c2_a_bc,c2_ab,c2_ac,gap,c2_a_bc_closed_form" << (spread ? ",decomposition_reference,decomposition_min,decomposition_max" : "")
       << '\n';
    for (const auto& [r, s] : rows) {
      os << r.photons << ',' << format_number(r.c2_a_bc) << ',' << format_number(r.c2_ab) << ',' << format_number(r.c2_ac) << ','
         << format_number(r.gap) << ',' << format_number(r.c2_a_bc_closed_form);
      if (spread) os << ',' << format_number(s.reference) << ',' << format_number(s.min) << ',' << format_number(s.max);
      os << '\n';
    }
    return ok(os.str());
  }
  json arr = json::array();
  for (const auto& [r, s] : rows) {
    json row{{"photons", r.photons}, {"c2_a_bc", num(r.c2_a_bc)}, {"c2_ab", num(r.c2_ab)}, {"c2_ac", num(r.c2_ac)},
             {"gap", num(r.gap)}, {"c2_a_bc_closed_form", num(r.c2_a_bc_closed_form)}};
    if (spread)
      row["decomposition"] = {{"samples", c.samples}, {"reference", num(s.reference)}, {"min", num(s.min)}, {"max", num(s.max)}};
    arr.push_back(row);
  }
  return ok(dump({{"rows", arr}, {"seed", c.seed}}));
}

CommandResult cmd_loss(const RunConfig& c) {
  const int n = single_photons(c, 3);
  const auto spec = make_spec(LatticeKind::rhomboidal, {0, 1});
  const auto basis = FockBasis::truncated(2, n);
  const auto rho = DensityMatrix::pure(localized_state(spec, n, basis));
  const auto out = apply_two_core_channel(rho, {0, 1}, c.gamma);
  const auto pops = localized_populations(out, spec);
  const double completeness = kraus_set(c.gamma, n).completeness_error();
  const double span = span_fidelity(out, spec);
  const double mean = mean_photon_number(out);
  auto binom_law = [&](int total, int kept) {
    return std::exp(log_binomial(total, kept)) * std::pow(c.gamma, total - kept) * std::pow(1.0 - c.gamma, kept);
  };

  std::optional<LossyQubitReport> qubit;
  if (c.encode) {
    const double beta = std::sqrt(std::max(0.0, 1.0 - c.alpha * c.alpha));
    qubit = lossy_qubit_report(c.alpha, beta, c.encode->n, c.encode->m, c.gamma);
  }

  if (c.format == "csv") {
    std::ostringstream os;
    if (qubit) {
      os << "lost,weight,predicted_weight,purity,fidelity,coherence_re,coherence_im\n";
      for (const auto& b : qubit->branches)
        os << b.lost << ',' << format_number(b.weight) << ',' << format_number(b.predicted_weight) << ','
           << format_number(b.purity) << ',' << format_number(b.fidelity) << ',' << format_number(b.coherence.real()) << ','
           << format_number(b.coherence.imag()) << '\n';
    } else {
      os << "n,population,binomial\n";
      for (int k = 0; k <= n; ++k)
        os << k << ',' << format_number(pops[static_cast<std::size_t>(k)]) << ',' << format_number(binom_law(n, k)) << '\n';
    }
    return ok(os.str());
  }
  json p = json::array();
  for (int k = 0; k <= n; ++k)
    p.push_back({{"n", k}, {"population", num(pops[static_cast<std::size_t>(k)])}, {"binomial", num(binom_law(n, k))}});
  json j{{"gamma", num(c.gamma)},
         {"kraus_completeness_error", num(completeness)},
         {"state",
          {{"photons", n},
           {"span_fidelity", num(span)},
           {"mean_photon_number", num(mean)},
           {"expected_mean_photon_number", num((1.0 - c.gamma) * n)},
           {"min_eigenvalue", num(out.min_eigenvalue())},
           {"populations", p}}}};
  if (qubit) {
    json branches = json::array();
    for (const auto& b : qubit->branches)
      branches.push_back({{"lost", b.lost},
                          {"weight", num(b.weight)},
                          {"predicted_weight", num(b.predicted_weight)},
                          {"purity", num(b.purity)},
                          {"fidelity", num(b.fidelity)},
                          {"alpha_k", {num(b.alpha_k.real()), num(b.alpha_k.imag())}},
                          {"beta_k", {num(b.beta_k.real()), num(b.beta_k.imag())}},
                          {"coherence", {num(b.coherence.real()), num(b.coherence.imag())}}});
    j["qubit"] = {{"N", qubit->photons},
                  {"M", qubit->extra},
                  {"alpha", num(qubit->alpha.real())},
                  {"beta", num(qubit->beta.real())},
                  {"min_purity", num(qubit->min_purity)},
                  {"min_fidelity", num(qubit->min_fidelity)},
                  {"branches", branches}};
  }
  return ok(dump(j));
}

FiberLayout load_layout(const RunConfig& c) {
  if (c.layout == "four") return four_core_layout(c.kappa, c.diagonal, c.epsilon);
  if (c.layout == "sixteen") return grouped_layout(4, c.kappa, c.diagonal, c.epsilon);
  if (c.layout == "hexagonal") return grouped_layout(6, c.kappa, c.diagonal, c.epsilon);
  std::ifstream in(c.layout);
  if (!in) throw std::invalid_argument("layout: cannot open '" + c.layout + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("layout: ") + e.what());
  }
  return layout_from_json(j);
}

CommandResult cmd_mcf(const RunConfig& c) {
  const auto layout = load_layout(c);
  const auto budget = channel_budget(layout);
  if (layout.channels.empty()) throw std::invalid_argument("mcf: layout has no channels");
  const auto ch = static_cast<std::size_t>(c.channel);
  if (ch >= layout.channels.size()) throw std::invalid_argument("mcf: channel index out of range");
  const int n = single_photons(c, 1);
  const auto basis = FockBasis::fixed(layout.core_count(), n);
  StateVector input(basis);
  if (c.input == "localized") {
    input = channel_state(layout, ch, n, basis);
  } else {
    OccupationVector occ(static_cast<std::size_t>(layout.core_count()), 0);
    occ[static_cast<std::size_t>(layout.channels[ch].spec.modes.front())] = n;
    input = StateVector::fock(basis, occ);
  }
  const double zmax = c.zmax.value_or(20.0 / c.kappa);
  const auto grid = uniform_grid(zmax, c.zsteps.value_or(101));
  const auto scan = crosstalk_scan(layout, input, grid);
  if (c.format == "csv") {
    std::ostringstream os;
    scan.write_csv(os);
    return ok(os.str());
  }
  const double leak3 = crosstalk_scan(layout.scaled(3.0), input, grid).max_leakage();
  json records = json::array();
  for (const auto& r : scan.records) {
    json pops = json::array();
    for (double p : r.channel_populations) pops.push_back(num(p));
    records.push_back({{"z", num(r.z)}, {"leakage", num(r.leakage)}, {"fidelity", num(r.fidelity)}, {"channel_populations", pops}});
  }
  json j{{"layout", layout_to_json(layout)},
         {"budget", {{"cores", budget.cores}, {"channels", budget.channels}, {"ratio", num(budget.ratio)}}},
         {"channel", layout.channels[ch].name},
         {"photons", n},
         {"input", c.input},
         {"max_leakage", num(scan.max_leakage())},
         {"max_leakage_3kappa", num(leak3)},
         {"records", records}};
  if (layout.channels.size() >= 2) {
    const double beta = std::sqrt(std::max(0.0, 1.0 - c.alpha * c.alpha));
    const auto q = qubit_channel_fidelity(layout, c.alpha, beta, zmax, c.gamma);
    j["qubit"] = {{"alpha", num(c.alpha)},   {"beta", num(beta)},
                  {"z", num(zmax)},          {"gamma", num(c.gamma)},
                  {"fidelity", num(q.fidelity)}, {"no_loss_weight", num(q.no_loss_weight)},
                  {"no_loss_fidelity", num(q.no_loss_fidelity)}, {"leakage", num(q.leakage)}};
  }
  return ok(dump(j));
}

}  // namespace

CommandResult execute(const RunConfig& config) {
  config.validate();
  const auto& s = config.subcommand;
  if (s == "bands") return cmd_bands(config);
  if (s == "state") return cmd_state(config);
  if (s == "verify") return cmd_verify(config);
  if (s == "evolve") return cmd_evolve(config);
  if (s == "prepare") return cmd_prepare(config);
  if (s == "entangle") return cmd_entangle(config);
  if (s == "monogamy") return cmd_monogamy(config);
  if (s == "loss") return cmd_loss(config);
  return cmd_mcf(config);
}

}  // namespace focklat::cli
