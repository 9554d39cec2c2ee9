#pragma once

#include "focklat/fockspace.hpp"
#include "focklat/lattice.hpp"

#include "json.hpp"

#include <ostream>
#include <string>

namespace focklat {

/// printf("%.15g") with negative zero printed as 0.
std::string format_number(double value);

/// {modes, total, amplitudes: [{occ, re, im}]}; zero amplitudes are skipped.
/// `total` is the basis max total.
nlohmann::json state_to_json(const StateVector& state);
/// Inverse of state_to_json onto a fixed (single total) or truncated basis.
StateVector state_from_json(const nlohmann::json& j);

/// {kind, sites:[{id,label,eps}], edges:[{i,j,kappa}], connectors, localized,
///  cell:{labels, offsets}}. `localized` lists the designated cell site ids;
///  `cell` is the translation unit cell (absent for custom lattices).
nlohmann::json lattice_to_json(const Lattice& lattice);
Lattice lattice_from_json(const nlohmann::json& j);

/// `k, band_0, band_1, ...` (2D lattices: `kx, ky, band_0, ...`).
void write_bands_csv(const BandStructure& bands, std::ostream& out);

}  // namespace focklat
