// Field snapshot container: one text header line naming each array and its
// byte offset (relative to the end of the header line), then the named
// arrays as little-endian 64-bit floats in row-major (i-fastest) order.
#pragma once

#include "axmhd/state.hpp"

#include <string>

namespace axmhd {

void write_snapshot(const std::string& path, const State& state);

// Reads a snapshot; the derived cache is restored from the stored arrays.
State read_snapshot(const std::string& path);

} // namespace axmhd
