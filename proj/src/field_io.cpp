#include "slicesim/field_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace slicesim {

namespace {
constexpr char kMagic[4] = {'W', 'F', 'L', 'D'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}
}  // namespace

void write_snapshot(const WaveField& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("write_snapshot: cannot open " + path);
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, std::uint32_t(f.grid.dim));
  for (int ax = 0; ax < f.grid.dim; ax++) put<std::uint32_t>(os, std::uint32_t(f.grid.n[ax]));
  for (int ax = 0; ax < f.grid.dim; ax++) {
    put<double>(os, f.grid.lo[ax]);
    put<double>(os, f.grid.hi[ax]);
  }
  for (const cplx& v : f.values) {
    put<double>(os, v.real());
    put<double>(os, v.imag());
  }
  if (!os) throw Error("write_snapshot: write failed for " + path);
}

WaveField read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("read_snapshot: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw Error("read_snapshot: bad magic");
  if (get<std::uint32_t>(is) != kVersion) throw Error("read_snapshot: unsupported version");
  const int dim = int(get<std::uint32_t>(is));
  if (dim != 1 && dim != 2) throw Error("read_snapshot: bad dim");
  std::array<std::size_t, 2> n{1, 1};
  for (int ax = 0; ax < dim; ax++) n[ax] = get<std::uint32_t>(is);
  std::array<double, 2> lo{0, 0}, hi{1, 1};
  for (int ax = 0; ax < dim; ax++) {
    lo[ax] = get<double>(is);
    hi[ax] = get<double>(is);
  }
  Grid g = dim == 1 ? Grid::make_1d(lo[0], hi[0], n[0])
                    : Grid::make_2d(lo[0], hi[0], n[0], lo[1], hi[1], n[1]);
  WaveField f;
  f.grid = g;
  f.values.resize(g.size());
  for (cplx& v : f.values) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    v = {re, im};
  }
  if (!is) throw Error("read_snapshot: truncated file " + path);
  return f;
}

void write_snapshot_text(const WaveField& f, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw Error("write_snapshot_text: cannot open " + path);
  const Grid& g = f.grid;
  if (g.dim == 1)
    std::fprintf(fp, "# x\tre\tim\tdensity\n");
  else
    std::fprintf(fp, "# x\ty\tre\tim\tdensity\n");
  for (std::size_t ix = 0; ix < g.n[0]; ix++) {
    const double x = g.coord(0, ix);
    for (std::size_t iy = 0; iy < g.n[1]; iy++) {
      const cplx v = f.values[g.index(ix, iy)];
      if (g.dim == 1)
        std::fprintf(fp, "%.17g\t%.17g\t%.17g\t%.17g\n", x, v.real(), v.imag(),
                     std::norm(v));
      else
        std::fprintf(fp, "%.17g\t%.17g\t%.17g\t%.17g\t%.17g\n", x, g.coord(1, iy),
                     v.real(), v.imag(), std::norm(v));
    }
  }
  std::fclose(fp);
}

}  // namespace slicesim
