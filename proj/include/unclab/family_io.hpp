#pragma once

#include <filesystem>
#include <string>

#include "unclab/spectrum.hpp"

namespace unclab {

/// Custom family description (JSON):
///
///   {
///     "name": "two-mode",
///     "symmetric": true,
///     "real": true,
///     "entries": [ {"n": 1, "expr": "exp"}, {"n": -1, "expr": "poly", "coeff": [0.5, 0.0]},
///                  {"n": 2, "expr": "table"} ],
///     "table": { "1.0": [[2, 0.1, 0.0]], "2.0": [[2, 0.05, 0.0]] }
///   }
///
/// expr "exp"   -> coeff * exp(-alpha |n|)
/// expr "poly"  -> coeff * |n|^{-alpha} (n != 0)
/// expr "table" -> value listed under the table key for alpha, linearly
///                 interpolated between keys; alpha outside the keys is an error.
/// coeff defaults to [1, 0]. Modes not listed are zero. The symmetric/real
/// claims are checked against the coefficients.
CoefficientFamily parse_family_json(const std::string& text);
CoefficientFamily load_family_json(const std::filesystem::path& path);

}  // namespace unclab
