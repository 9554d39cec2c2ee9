#include "focklat/cli.hpp"

#include "focklat/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace focklat::cli {

namespace {

int parse_int(std::string_view text, const char* what) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw std::invalid_argument(std::string(what) + ": '" + std::string(text) + "' is not an integer");
  return v;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

PhotonRange PhotonRange::parse(std::string_view text) {
  PhotonRange r;
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    r.first = r.last = parse_int(text, "photons");
  } else {
    r.first = parse_int(text.substr(0, dots), "photons");
    r.last = parse_int(text.substr(dots + 2), "photons");
  }
  require(r.first >= 0, "photons: must be non-negative");
  require(r.last >= r.first, "photons: empty range " + std::string(text));
  return r;
}

std::string PhotonRange::to_string() const {
  return single() ? std::to_string(first) : std::to_string(first) + ".." + std::to_string(last);
}

Encoding parse_encoding(std::string_view text) {
  std::optional<int> n, m;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    const auto eq = item.find('=');
    require(eq != std::string_view::npos, "encode: expected KEY=VALUE, got '" + std::string(item) + "'");
    const auto key = item.substr(0, eq);
    const int v = parse_int(item.substr(eq + 1), "encode");
    if (key == "N") n = v;
    else if (key == "M") m = v;
    else throw std::invalid_argument("encode: unknown key '" + std::string(key) + "'");
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
  }
  require(n && m, "encode: both N and M are required");
  require(*n >= 0, "encode: N must be non-negative");
  require(*m >= 1, "encode: M must be at least 1");
  return {*n, *m};
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"bands", "state", "verify", "evolve", "prepare",
                                              "entangle", "monogamy", "loss", "mcf"};
  return names;
}

void RunConfig::validate() const {
  require(std::find(subcommands().begin(), subcommands().end(), subcommand) != subcommands().end(),
          "subcommand: unknown '" + subcommand + "'");
  const auto kind = lattice_kind_from_string(lattice);
  require(kind != LatticeKind::custom, "lattice: custom lattices are not available from the command line");
  if (photons) {
    require(photons->first >= 0 && photons->last >= photons->first, "photons: invalid range");
    require(photons->last <= 1000, "photons: at most 1000");
  }
  require(std::isfinite(kappa) && kappa > 0.0, "kappa: must be positive");
  require(std::isfinite(epsilon), "epsilon: must be finite");
  if (zmax) require(std::isfinite(*zmax) && *zmax > 0.0, "zmax: must be positive");
  if (zsteps) require(*zsteps >= 2 && *zsteps <= 100000, "zsteps: must lie in [2, 100000]");
  require(gamma >= 0.0 && gamma < 1.0, "gamma: must lie in [0, 1)");
  require(format == "csv" || format == "json", "format: csv or json");
  if (encode) require(encode->n >= 0 && encode->m >= 1, "encode: need N >= 0 and M >= 1");
  require(alpha >= 0.0 && alpha <= 1.0, "alpha: must lie in [0, 1]");
  require(std::isfinite(diagonal) && diagonal >= 0.0, "diagonal: must be non-negative");
  require(channel >= 0, "channel: must be non-negative");
  require(input == "localized" || input == "site", "input: localized or site");
  require(samples >= 0 && samples <= 1000000, "samples: must lie in [0, 1000000]");
  require(ksamples >= 2 && ksamples <= 4096, "ksamples: must lie in [2, 4096]");
  require(std::isfinite(tolerance) && tolerance > 0.0, "tolerance: must be positive");
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["subcommand"] = subcommand;
  j["lattice"] = lattice;
  j["photons"] = photons ? nlohmann::json(photons->to_string()) : nlohmann::json(nullptr);
  j["kappa"] = kappa;
  j["epsilon"] = epsilon;
  j["zmax"] = zmax ? nlohmann::json(*zmax) : nlohmann::json(nullptr);
  j["zsteps"] = zsteps ? nlohmann::json(*zsteps) : nlohmann::json(nullptr);
  j["gamma"] = gamma;
  j["format"] = format;
  j["out"] = out;
  j["seed"] = seed;
  j["encode"] = encode ? nlohmann::json({{"N", encode->n}, {"M", encode->m}}) : nlohmann::json(nullptr);
  j["alpha"] = alpha;
  j["layout"] = layout;
  j["diagonal"] = diagonal;
  j["channel"] = channel;
  j["input"] = input;
  j["samples"] = samples;
  j["ksamples"] = ksamples;
  j["tolerance"] = tolerance;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    require(j.is_object(), "config: expected a JSON object");
    static const std::vector<std::string> known{"subcommand", "lattice", "photons", "kappa", "epsilon", "zmax", "zsteps",
                                                "gamma", "format", "out", "seed", "encode", "alpha", "layout",
                                                "diagonal", "channel", "input", "samples", "ksamples", "tolerance"};
    for (const auto& [key, _] : j.items())
      require(std::find(known.begin(), known.end(), key) != known.end(), "config: unknown field '" + key + "'");
    c.subcommand = j.value("subcommand", c.subcommand);
    c.lattice = j.value("lattice", c.lattice);
    if (j.contains("photons") && !j["photons"].is_null())
      c.photons = j["photons"].is_number_integer() ? PhotonRange{j["photons"].get<int>(), j["photons"].get<int>()}
                                                   : PhotonRange::parse(j["photons"].get<std::string>());
    c.kappa = j.value("kappa", c.kappa);
    c.epsilon = j.value("epsilon", c.epsilon);
    if (j.contains("zmax") && !j["zmax"].is_null()) c.zmax = j["zmax"].get<double>();
    if (j.contains("zsteps") && !j["zsteps"].is_null()) c.zsteps = j["zsteps"].get<int>();
    c.gamma = j.value("gamma", c.gamma);
    c.format = j.value("format", c.format);
    c.out = j.value("out", c.out);
    c.seed = j.value("seed", c.seed);
    if (j.contains("encode") && !j["encode"].is_null()) {
      const auto& e = j["encode"];
      c.encode = e.is_string() ? parse_encoding(e.get<std::string>()) : Encoding{e.at("N").get<int>(), e.at("M").get<int>()};
    }
    c.alpha = j.value("alpha", c.alpha);
    c.layout = j.value("layout", c.layout);
    c.diagonal = j.value("diagonal", c.diagonal);
    c.channel = j.value("channel", c.channel);
    c.input = j.value("input", c.input);
    c.samples = j.value("samples", c.samples);
    c.ksamples = j.value("ksamples", c.ksamples);
    c.tolerance = j.value("tolerance", c.tolerance);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return c;
}

}  // namespace focklat::cli
