#pragma once

#include <filesystem>
#include <iosfwd>

#include "hyperslice/slice.hpp"

namespace hyperslice {

// Plain-text formats. Blank lines and lines starting with '#' are ignored.
//
// Orientation: one vector per line, whitespace-separated decimals.
// Body:        first line n, then n edge-generator rows, then the base row.
//
// Writers emit 17 significant digits so a written file reads back to the
// same doubles.

FlatOrientation parse_orientation(std::istream& in);
FlatOrientation read_orientation_file(const std::filesystem::path& path);
void write_orientation(std::ostream& out, const FlatOrientation& orientation);

Body parse_body(std::istream& in);
Body read_body_file(const std::filesystem::path& path);
void write_body(std::ostream& out, const Body& body);

}  // namespace hyperslice
