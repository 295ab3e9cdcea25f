#pragma once

#include <string>

#include "obslab/core/field.hpp"

namespace obslab {

/// Compiles a fixture expression into a scalar function of the node point.
///
/// Language: numeric literals; variables x1, x2, x3 and r (= |x|); binary
/// + - * / ^; unary minus; functions pow, pospow (max(a,0)^b), abs, sqrt,
/// min, max, step (1 for a > 0 else 0). Just enough to write every obstacle,
/// source, and boundary fixture as a string; deliberately not a general
/// expression engine.
ScalarFn parse_expression(const std::string& text);

}  // namespace obslab
