#include "slicesim/potential.hpp"

#include <cmath>

namespace slicesim {

Potential Potential::on_grid(const Grid& g,
                             const std::function<double(std::array<double, 2>)>& v) {
  Potential p;
  p.kind_ = Kind::static_grid;
  p.values_.resize(g.size());
  double bound = 0;
  for (std::size_t ix = 0; ix < g.n[0]; ix++)
    for (std::size_t iy = 0; iy < g.n[1]; iy++) {
      const double val = v({g.coord(0, ix), g.dim == 2 ? g.coord(1, iy) : 0.0});
      if (!std::isfinite(val)) throw ConfigError("potential: non-finite value");
      p.values_[g.index(ix, iy)] = val;
      bound = std::max(bound, std::abs(val));
    }
  p.bound_ = bound;
  return p;
}

Potential Potential::time_dependent(Callback cb, double bound) {
  if (!cb) throw ConfigError("potential: empty callback");
  if (!(bound >= 0) || !std::isfinite(bound))
    throw ConfigError("potential: callback needs a finite |V| bound");
  Potential p;
  p.kind_ = Kind::time_dependent;
  p.callback_ = std::move(cb);
  p.bound_ = bound;
  return p;
}

void Potential::sample(const Grid& g, double t, std::vector<double>& out) const {
  out.resize(g.size());
  switch (kind_) {
    case Kind::free:
      std::fill(out.begin(), out.end(), 0.0);
      return;
    case Kind::static_grid:
      if (values_.size() != g.size())
        throw ConfigError("potential: static grid does not match the field grid");
      out = values_;
      return;
    case Kind::time_dependent:
      for (std::size_t ix = 0; ix < g.n[0]; ix++)
        for (std::size_t iy = 0; iy < g.n[1]; iy++)
          out[g.index(ix, iy)] =
              callback_({g.coord(0, ix), g.dim == 2 ? g.coord(1, iy) : 0.0}, t);
      return;
  }
}

}  // namespace slicesim
