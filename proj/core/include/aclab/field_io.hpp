#pragma once

#include <filesystem>
#include <iosfwd>

#include "aclab/field.hpp"

namespace aclab {

// Snapshot format: one line of JSON metadata (dim, points_per_axis, extent,
// epsilon, time), a newline, then the values as little-endian doubles in
// row-major order.
void write_field(std::ostream& out, const ScalarField& field);
ScalarField read_field(std::istream& in);

void write_field(const std::filesystem::path& path, const ScalarField& field);
ScalarField read_field(const std::filesystem::path& path);

}  // namespace aclab
