#include "focklat/states.hpp"

#include "focklat/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace focklat {

LocalizedStateSpec LocalizedStateSpec::sign_free() const {
  LocalizedStateSpec out = *this;
  out.sign_sites.clear();
  return out;
}

int catalog_cell_size(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::rhomboidal:
    case LatticeKind::symmetric_rhomboidal:
      return 2;
    case LatticeKind::stub:
      return 3;
    case LatticeKind::lieb:
      return 4;
    case LatticeKind::kagome:
      return 6;
    case LatticeKind::custom:
      break;
  }
  throw std::invalid_argument("custom lattices have no catalog state");
}

LocalizedStateSpec make_spec(LatticeKind kind, std::vector<int> modes) {
  LocalizedStateSpec spec;
  spec.kind = kind;
  const auto expected = static_cast<std::size_t>(catalog_cell_size(kind));
  switch (kind) {
    case LatticeKind::symmetric_rhomboidal:
      spec.fb_eigenvalue_coeff = 1.0;
      [[fallthrough]];
    case LatticeKind::rhomboidal:
    case LatticeKind::stub:
      spec.sign_sites = {1};
      break;
    case LatticeKind::lieb:
      spec.sign_sites = {1, 3};
      break;
    case LatticeKind::kagome:
      spec.sign_sites = {1, 3, 5};
      spec.fb_eigenvalue_coeff = 2.0;
      break;
    case LatticeKind::custom:
      break;
  }
  if (modes.size() != expected)
    throw std::invalid_argument("make_spec: " + std::string(to_string(kind)) + " state needs " +
                                std::to_string(expected) + " cell modes");
  for (std::size_t i = 0; i < modes.size(); ++i)
    for (std::size_t j = i + 1; j < modes.size(); ++j)
      if (modes[i] == modes[j]) throw std::invalid_argument("make_spec: repeated cell mode");
  spec.modes = std::move(modes);
  spec.normalization_base = static_cast<int>(expected);
  return spec;
}

LocalizedStateSpec catalog_spec(const Lattice& lattice) { return make_spec(lattice.kind(), lattice.cell()); }

namespace {

double cell_amplitude(const LocalizedStateSpec& spec, std::span<const int> local) {
  int total = 0, sign = 0;
  for (int n : local) total += n;
  for (int s : spec.sign_sites) sign += local[static_cast<std::size_t>(s)];
  const double base = spec.normalization_base;
  const double mag = total <= kExactMultinomialLimit
                         ? sqrt_multinomial(local) / std::pow(base, 0.5 * total)
                         : std::exp(0.5 * (log_multinomial(local) - total * std::log(base)));
  return sign % 2 ? -mag : mag;
}

void check_modes(const LocalizedStateSpec& spec, int mode_count) {
  for (int m : spec.modes)
    if (m < 0 || m >= mode_count) throw std::invalid_argument("localized state: cell mode outside the basis");
}

}  // namespace

double amplitude(const LocalizedStateSpec& spec, const OccupationVector& occupation) {
  check_modes(spec, static_cast<int>(occupation.size()));
  std::vector<int> local;
  int inside = 0, total = 0;
  for (int m : spec.modes) {
    local.push_back(occupation[static_cast<std::size_t>(m)]);
    inside += local.back();
  }
  for (int n : occupation) total += n;
  if (inside != total) throw std::invalid_argument("amplitude: occupation has photons outside the cell");
  return cell_amplitude(spec, local);
}

StateVector localized_state(const LocalizedStateSpec& spec, int photons, const BasisPtr& basis) {
  const LocalizedStateSpec* one = &spec;
  return localized_product(std::span(one, 1), std::span(&photons, 1), basis);
}

StateVector localized_product(std::span<const LocalizedStateSpec> specs, std::span<const int> photons,
                              const BasisPtr& basis) {
  if (specs.size() != photons.size()) throw std::invalid_argument("localized_product: size mismatch");
  std::vector<bool> used(static_cast<std::size_t>(basis->modes()), false);
  for (const auto& spec : specs) {
    check_modes(spec, basis->modes());
    for (int m : spec.modes) {
      if (used[static_cast<std::size_t>(m)]) throw std::invalid_argument("localized_product: cells overlap");
      used[static_cast<std::size_t>(m)] = true;
    }
  }
  for (int n : photons)
    if (n < 0) throw std::invalid_argument("localized state: negative photon number");

  StateVector out(basis);
  OccupationVector occ(static_cast<std::size_t>(basis->modes()), 0);
  // odometer over the per-cell compositions
  std::vector<std::vector<std::vector<int>>> comps;
  for (std::size_t c = 0; c < specs.size(); ++c)
    comps.push_back(weak_compositions(photons[c], static_cast<int>(specs[c].modes.size())));
  std::vector<std::size_t> pos(specs.size(), 0);
  bool any = false;
  while (true) {
    double amp = 1.0;
    for (std::size_t c = 0; c < specs.size(); ++c) {
      const auto& local = comps[c][pos[c]];
      for (std::size_t k = 0; k < local.size(); ++k) occ[static_cast<std::size_t>(specs[c].modes[k])] = local[k];
      amp *= cell_amplitude(specs[c], local);
    }
    const auto idx = basis->index_of(occ);
    if (!idx) throw std::invalid_argument("localized state: photon number not covered by the basis");
    out.amplitudes()[static_cast<Eigen::Index>(*idx)] = amp;
    any = true;
    std::size_t c = 0;
    while (c < specs.size() && ++pos[c] == comps[c].size()) pos[c++] = 0;
    if (c == specs.size()) break;
  }
  if (!any) throw std::invalid_argument("localized state: empty product");
  return out;
}

bool verify_recursion(std::span<const double> coefficients, double tol) {
  if (coefficients.empty()) return false;
  const int n = static_cast<int>(coefficients.size()) - 1;
  // C_{p+1,q} with p+q+1 = N is coefficients[q]; C_{p,q+1} is coefficients[q+1]
  for (int q = 0; q < n; ++q) {
    const int p = n - 1 - q;
    const double lhs = coefficients[static_cast<std::size_t>(q)];
    const double rhs = -std::sqrt(q + 1.0) / std::sqrt(p + 1.0) * coefficients[static_cast<std::size_t>(q + 1)];
    if (std::abs(lhs - rhs) > tol) return false;
  }
  return true;
}

bool verify_recursion(const LocalizedStateSpec& spec, int photons, double tol) {
  if (spec.modes.size() != 2) throw std::invalid_argument("verify_recursion: two-site states only");
  std::vector<double> c;
  for (int q = 0; q <= photons; ++q) {
    const std::vector<int> local{photons - q, q};
    c.push_back(cell_amplitude(spec, local));
  }
  return verify_recursion(c, tol);
}

int default_poisson_cutoff(std::complex<double> beta) {
  const double b = std::abs(beta);
  return std::max(20, static_cast<int>(std::ceil(b * b + 10.0 * b + 10.0)));
}

double poisson_tail(std::complex<double> beta, int cutoff) {
  const double mean = std::norm(beta);
  if (mean == 0.0) return 0.0;
  double tail = 0.0;
  for (int n = cutoff + 1; n < cutoff + 2000; ++n) {
    const double term = std::exp(n * std::log(mean) - mean - std::lgamma(n + 1.0));
    tail += term;
    if (n > mean && term < 1e-40) break;
  }
  return tail;
}

StateVector poissonian_superposition(const LocalizedStateSpec& spec, std::complex<double> beta, int cutoff,
                                     const BasisPtr& basis) {
  if (cutoff < 0) throw std::invalid_argument("poissonian_superposition: negative cutoff");
  if (basis->min_total() > 0 || basis->max_total() < cutoff)
    throw std::invalid_argument("poissonian_superposition: basis must hold every sector 0..cutoff");
  const double tail = poisson_tail(beta, cutoff);
  if (tail >= 1e-12)
    throw std::invalid_argument("poissonian_superposition: cutoff " + std::to_string(cutoff) +
                                " leaves Poisson tail " + std::to_string(tail));
  StateVector out(basis);
  const double mean = std::norm(beta);
  for (int n = 0; n <= cutoff; ++n) {
    const std::complex<double> d =
        n == 0 ? std::complex<double>(std::exp(-0.5 * mean))
               : std::polar(std::exp(-0.5 * mean + n * std::log(std::abs(beta)) - 0.5 * std::lgamma(n + 1.0)),
                            n * std::arg(beta));
    if (d == 0.0) continue;
    out.amplitudes() += d * localized_state(spec, n, basis).amplitudes();
  }
  return out.normalized();
}

StateVector coherent_product_state(std::span<const std::complex<double>> alphas, const BasisPtr& basis) {
  if (static_cast<int>(alphas.size()) != basis->modes())
    throw std::invalid_argument("coherent_product_state: one amplitude per mode required");
  StateVector out(basis);
  for (std::size_t i = 0; i < basis->size(); ++i) {
    std::complex<double> amp = 1.0;
    const auto& occ = basis->state(i);
    for (std::size_t m = 0; m < alphas.size(); ++m) {
      const double mag = std::abs(alphas[m]);
      const int n = occ[m];
      if (n == 0) {
        amp *= std::exp(-0.5 * mag * mag);
      } else if (mag == 0.0) {
        amp = 0.0;
      } else {
        amp *= std::polar(std::exp(-0.5 * mag * mag + n * std::log(mag) - 0.5 * std::lgamma(n + 1.0)),
                          n * std::arg(alphas[m]));
      }
    }
    out.amplitudes()[static_cast<Eigen::Index>(i)] = amp;
  }
  return out.normalized();
}

}  // namespace focklat
