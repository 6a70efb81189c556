#pragma once

#include <string>
#include <string_view>

#include "lowk/potential.hpp"

namespace lowk {

/// Parse the key = value potential format. Throws ParseError with line and column.
Potential parse_potential(std::string_view text);

/// Read and parse a potential file; I/O failures throw std::runtime_error.
Potential read_potential_file(const std::string& path);

/// Canonical text form; parse_potential(write_potential(v)) == v.
std::string write_potential(const Potential& v);

}  // namespace lowk
