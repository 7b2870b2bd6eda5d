#pragma once

#include <filesystem>
#include <string>

#include "qfdiv/algebra.hpp"

namespace qfdiv {

// A parsed and validated problem: the algebra plus two states.
struct Problem {
  AlgebraSpec algebra;
  State phi;
  State omega;
  bool renormalize = false;
};

// Strict parse of the JSON problem format:
//
// {
//   "algebra": {"blocks": [{"dim": 2, "weight": 1.0}, ...]},
//   "phi":   [ [[ [re,im], ... ], ...], ... ],   // one row-major matrix per block
//   "omega": [ ... ],
//   "options": {"renormalize": false}            // optional
// }
//
// Unknown fields are rejected; diagnostics name the offending path.
Problem parse_problem(const std::string& text);

Problem load_problem(const std::filesystem::path& path);

}  // namespace qfdiv
