#pragma once

#include <string>

#include "slicesim/grid.hpp"

namespace slicesim {

// Binary snapshot: magic "WFLD", version u32, dim u32, n per axis (u32),
// extents (lo, hi per axis, f64), then interleaved (re, im) f64 row-major.
// Little-endian.
void write_snapshot(const WaveField& f, const std::string& path);
WaveField read_snapshot(const std::string& path);

// Plot-friendly text export: x [y] re im |psi|^2, tab-separated.
void write_snapshot_text(const WaveField& f, const std::string& path);

}  // namespace slicesim
