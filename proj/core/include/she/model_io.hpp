#pragma once

// Structured-text (JSON) form of PlanetSpec.
//
//   {
//     "schema_version": 1,
//     "radius": 1.0, "theta0": 1.0,
//     "delta": 0.3, "delta1": 0.001, "inner_fraction": 0.5,
//     "gravitational_constant": 1.0,
//     "peak":   {"kind": "quadratic", "curvature": 2.0,
//                "remainder": {"kind": "power", "coefficient": 0.1, "order": 3}},
//     "weight": {"kind": "fourier_tail", "beta0": 1.5, "half_width": 0.3, "taper_order": 4}
//   }
//
// Peak kinds: quadratic {curvature, remainder?}, power_cusp {alpha, a_minus,
// a_plus, remainder?}, power_c1 {alpha, a_minus, a_plus}.
// Weight kinds: smooth_power {k, gk, correction?}, two_sided_cusp {k, g_plus,
// g_minus, correction?}, c1_mixed {g1, g_plus, g_minus, alpha}, fourier_tail
// {beta0, half_width, taper_order}.
// Correction kinds: none, power, signed_power.
// Unknown keys are rejected; schema_version is mandatory.

#include <cstdint>
#include <string>
#include <string_view>

#include "she/model.hpp"

namespace she {

/// Canonical JSON text (sorted keys). Throws NotSerializable for custom callables.
std::string planet_spec_to_json(const PlanetSpec& spec);

/// Parse and schema-check. Errors are ErrorKind::Config with a field path
/// rooted at `path`, e.g. "planet.peak.alpha: missing required field".
PlanetSpec planet_spec_from_json(std::string_view text, std::string_view path = "planet");

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// Hash of the canonical serialization; custom callables contribute a fixed
/// marker, so two specs differing only in a custom callable collide.
std::uint64_t spec_fingerprint(const PlanetSpec& spec);

std::string hex64(std::uint64_t value);

}  // namespace she
