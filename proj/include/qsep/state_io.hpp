#pragma once

#include <iosfwd>
#include <string>

#include "qsep/states.hpp"

namespace qsep {

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

// Text state format: line 1 is "d_A d_B"; then d_A*d_B lines of d_A*d_B
// whitespace-separated entries "re,im", row r column c being entry(r,c).
// Written doubles round-trip bit-exactly.
void write_state(std::ostream& out, const BipartiteDensity& rho);
std::string write_state_string(const BipartiteDensity& rho);

// Parses and validates; malformed input or an unphysical matrix raises
// std::runtime_error.
BipartiteDensity read_state(std::istream& in);
BipartiteDensity read_state_file(const std::string& path);

} // namespace qsep
