#pragma once

#include <span>
#include <string>
#include <string_view>

#include "phasespace/gaussian_state.hpp"
#include "phasespace/oscillator.hpp"
#include "phasespace/symplectic.hpp"

namespace phasespace {

/// JSON documents read and written by the C API and the CLI. Malformed or
/// incomplete documents raise ConfigInvalid naming the offending field.
///
/// Hamiltonian:
///   {"n_modes": N,
///    "B": [[...]] | {"kind": "constant", "matrix": [[...]]}
///         | {"kind": "cosine_modulated", "base": [[...]], "amplitude": [[...]], "frequency": w}
///         | {"kind": "piecewise", "segments": [{"until": t, "matrix": [[...]]}, ...]},
///    "C": [...]}                      (optional, constant drive)
/// State:
///   {"n_modes": N, "mean": [...], "dispersion_upper": [...]}
///   or {"kind": "vacuum", "n_modes": N} | {"kind": "coherent", "mean": [...]}
///   or {"kind": "thermal", "n_modes": N, "mean_photons": n}
/// Propagator:
///   {"n_modes": N, "time": t, "lambda": [[...]], "delta": [...]}
/// Frequency profile:
///   {"kind": "constant", "omega_sq": w2} | {"kind": "free"} | {"kind": "repulsive"}
///   | {"kind": "cosine_modulated", "omega0_sq": a, "depth": b, "frequency": f}
///   | {"kind": "piecewise", "segments": [{"duration": d, "omega_sq": w2}, ...], "periodic": bool}
QuadraticHamiltonian hamiltonian_from_json(std::string_view text);
GaussianState state_from_json(std::string_view text);
PropagatorReal propagator_from_json(std::string_view text, double tol = kDefaultSymplecticTolerance);
FrequencyProfile profile_from_json(std::string_view text);

// Writers emit every number as format_number does, so equal inputs give
// byte-identical output.
std::string state_to_json(const GaussianState& state);
std::string propagator_to_json(const PropagatorReal& prop);

// 17 significant digits in scientific notation ("%.16e"); non-finite values
// become "null" in JSON and "nan"/"inf" in CSV.
std::string format_number(double v);
std::string json_number(double v);
std::string json_array(std::span<const double> values);

}  // namespace phasespace
