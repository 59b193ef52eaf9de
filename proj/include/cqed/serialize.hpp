#pragma once

#include <iosfwd>
#include <string>

#include "cqed/fock.hpp"

namespace cqed {

// Text layout:
//   cqed-state 1 <atom_levels> <n_max_a> <n_max_b>
//   <re> <im>            one line per amplitude, 17 significant digits
// Binary layout (little-endian):
//   "CQEDSV01", int32 atom_levels, int32 n_max_a, int32 n_max_b,
//   then re, im interleaved as float64.

void write_state_text(std::ostream& out, const StateVector& state);
StateVector read_state_text(std::istream& in);

void write_state_binary(std::ostream& out, const StateVector& state);
StateVector read_state_binary(std::istream& in);

void save_state(const std::string& path, const StateVector& state, bool binary);
StateVector load_state(const std::string& path);

}  // namespace cqed
