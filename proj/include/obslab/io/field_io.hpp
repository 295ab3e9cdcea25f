#pragma once

#include <string>

#include "obslab/core/field.hpp"

namespace obslab {

/// Lattice dump layout: four int64 fields (magic, format version, dim, value
/// count) then four float64 fields (h, radius, gamma, reserved 0), followed
/// by `count` float64 values in dense-box linear order. All little-endian.
void write_field(const std::string& path, const GridField& field, double gamma = 0.0);

struct LoadedField {
    GridField field;
    double gamma{0.0};
};

/// Rebuilds the lattice from the header and checks the value count against
/// it; throws std::invalid_argument on a malformed or truncated file.
LoadedField read_field(const std::string& path);

}  // namespace obslab
