#include "focklat/cli.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <map>
#include <stdexcept>

namespace focklat::cli {

namespace {

using json = nlohmann::json;

void write_error(std::ostream& err, json record) { err << json{{"error", std::move(record)}}.dump() << '\n'; }

// Raw flag storage; a flag only overrides the config when it was given.
struct Flags {
  std::string lattice, photons, format, out, config, encode, layout, input;
  double kappa = 0, epsilon = 0, zmax = 0, gamma = 0, alpha = 0, diagonal = 0, tolerance = 0;
  int zsteps = 0, channel = 0, samples = 0, ksamples = 0;
  std::uint64_t seed = 0;
  bool print_config = false;
};

struct Registered {
  CLI::App* app = nullptr;
  std::map<std::string, CLI::Option*> options;
  bool given(const std::string& name) const {
    auto it = options.find(name);
    return it != options.end() && it->second->count() > 0;
  }
};

const char* describe(const std::string& name) {
  static const std::map<std::string, const char*> text{
      {"bands", "Bloch bands of a lattice and the flat-band frequency"},
      {"state", "Amplitudes of the localized multinomial state on the cell sites"},
      {"verify", "Check norm, connector annihilation and the eigenrelation; exit 1 naming the first failing invariant"},
      {"evolve", "Propagate a localized state (or a bare site excitation) and record populations, fidelity, leakage"},
      {"prepare", "Coupler transfer probability into the sign-free cell state versus z"},
      {"entangle", "Negativity and concurrence of the localized state across first cell site | rest"},
      {"monogamy", "CKW terms for the stub state; --samples adds the decomposition spread of rho_AB"},
      {"loss", "Amplitude damping of the two-core binomial state; --encode adds the per-branch qubit report"},
      {"mcf", "Multi-core fiber crosstalk scan, channel budget and path-qubit fidelity"}};
  return text.at(name);
}

Registered add_subcommand(CLI::App& app, const std::string& name, Flags& f) {
  Registered r;
  r.app = app.add_subcommand(name, describe(name));
  auto* s = r.app;
  auto add = [&](const std::string& key, CLI::Option* opt) { r.options[key] = opt; };
  const bool lattice = name != "monogamy" && name != "loss" && name != "mcf";
  if (lattice)
    add("lattice", s->add_option("--lattice", f.lattice, "rhomboidal, symmetric_rhomboidal, stub, lieb, kagome"));
  if (name != "bands") add("photons", s->add_option("--photons", f.photons, "photon number N or range a..b"));
  add("kappa", s->add_option("--kappa", f.kappa, "coupling constant (default 1)"));
  add("epsilon", s->add_option("--epsilon", f.epsilon, "propagation constant (default 0)"));
  if (name == "evolve" || name == "prepare" || name == "mcf") {
    add("zmax", s->add_option("--zmax", f.zmax, "end of the z grid"));
    add("zsteps", s->add_option("--zsteps", f.zsteps, "number of z points"));
  }
  if (name == "loss" || name == "mcf") add("gamma", s->add_option("--gamma", f.gamma, "loss parameter in [0, 1)"));
  if (name == "loss") add("encode", s->add_option("--encode", f.encode, "qubit encoding N=<n>,M=<m>"));
  if (name == "loss" || name == "mcf") add("alpha", s->add_option("--alpha", f.alpha, "qubit amplitude alpha (beta = sqrt(1 - alpha^2))"));
  if (name == "mcf") {
    add("layout", s->add_option("--layout", f.layout, "four, sixteen, hexagonal or a layout JSON file"));
    add("diagonal", s->add_option("--diagonal", f.diagonal, "A-B and S'-S coupling inside each group (default 0)"));
    add("channel", s->add_option("--channel", f.channel, "index of the channel carrying the input"));
  }
  if (name == "evolve" || name == "mcf") add("input", s->add_option("--input", f.input, "localized or site"));
  if (name == "monogamy") add("samples", s->add_option("--samples", f.samples, "random decompositions per N (default 0)"));
  if (name == "bands") add("ksamples", s->add_option("--ksamples", f.ksamples, "k points per dimension (default 64)"));
  if (name == "verify") add("tolerance", s->add_option("--tolerance", f.tolerance, "annihilation threshold; eigenrelation uses 100x (default 1e-12)"));
  add("format", s->add_option("--format", f.format, "csv or json (default csv)"));
  add("out", s->add_option("--out", f.out, "output file, or csv/json to write that format to stdout"));
  add("config", s->add_option("--config", f.config, "RunConfig JSON file; explicit flags take precedence"));
  add("seed", s->add_option("--seed", f.seed, "seed for randomized sampling (default 0)"));
  add("print_config", s->add_flag("--print-config", f.print_config, "print the resolved RunConfig as JSON and exit"));
  return r;
}

RunConfig resolve(const std::string& name, const Registered& r, const Flags& f) {
  RunConfig c;
  if (r.given("config")) {
    std::ifstream in(f.config);
    if (!in) throw std::invalid_argument("config: cannot open '" + f.config + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw std::invalid_argument(std::string("config: ") + e.what());
    }
    c = RunConfig::from_json(j);
    if (!c.subcommand.empty() && c.subcommand != name)
      throw std::invalid_argument("config: written for '" + c.subcommand + "', not '" + name + "'");
  }
  c.subcommand = name;
  if (r.given("lattice")) c.lattice = f.lattice;
  if (r.given("photons")) c.photons = PhotonRange::parse(f.photons);
  if (r.given("kappa")) c.kappa = f.kappa;
  if (r.given("epsilon")) c.epsilon = f.epsilon;
  if (r.given("zmax")) c.zmax = f.zmax;
  if (r.given("zsteps")) c.zsteps = f.zsteps;
  if (r.given("gamma")) c.gamma = f.gamma;
  if (r.given("encode")) c.encode = parse_encoding(f.encode);
  if (r.given("alpha")) c.alpha = f.alpha;
  if (r.given("layout")) c.layout = f.layout;
  if (r.given("diagonal")) c.diagonal = f.diagonal;
  if (r.given("channel")) c.channel = f.channel;
  if (r.given("input")) c.input = f.input;
  if (r.given("samples")) c.samples = f.samples;
  if (r.given("ksamples")) c.ksamples = f.ksamples;
  if (r.given("tolerance")) c.tolerance = f.tolerance;
  if (r.given("seed")) c.seed = f.seed;
  if (r.given("format")) c.format = f.format;
  if (r.given("out")) {
    if (f.out == "csv" || f.out == "json") {
      c.format = f.out;
      c.out.clear();
    } else {
      c.out = f.out;
      if (!r.given("format") && f.out.size() > 5 && f.out.ends_with(".json")) c.format = "json";
    }
  }
  c.validate();
  return c;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Localized quantum states of light in flat-band photonic lattices", "focklat"};
  app.require_subcommand(1);
  Flags flags;
  std::map<std::string, Registered> subs;
  for (const auto& name : subcommands()) subs[name] = add_subcommand(app, name, flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    write_error(err, {{"kind", "usage"}, {"message", e.what()}});
    return kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  RunConfig config;
  try {
    config = resolve(name, subs.at(name), flags);
  } catch (const std::exception& e) {
    write_error(err, {{"kind", "usage"}, {"message", e.what()}});
    return kExitUsage;
  }
  if (flags.print_config) {
    out << config.to_json().dump(2) << '\n';
    return kExitOk;
  }

  CommandResult result;
  try {
    result = execute(config);
  } catch (const std::invalid_argument& e) {
    write_error(err, {{"kind", "usage"}, {"message", e.what()}});
    return kExitUsage;
  } catch (const std::exception& e) {
    write_error(err, {{"kind", "runtime"}, {"message", e.what()}});
    return kExitRuntime;
  }

  if (config.out.empty()) {
    out << result.artifact;
  } else {
    std::ofstream file(config.out, std::ios::binary);
    if (!file || !(file << result.artifact)) {
      write_error(err, {{"kind", "runtime"}, {"message", "cannot write '" + config.out + "'"}});
      return kExitRuntime;
    }
  }
  if (result.error) write_error(err, *result.error);
  return result.exit_code;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace focklat::cli
