#pragma once

#include <array>
#include <functional>
#include <vector>

#include "slicesim/grid.hpp"

namespace slicesim {

// Scalar external potential. Either free space, a fixed real grid, or a
// time-dependent callback sampled at step midpoints.
class Potential {
 public:
  enum class Kind { free, static_grid, time_dependent };
  using Callback = std::function<double(std::array<double, 2>, double)>;

  static Potential free_space() { return Potential(); }
  static Potential on_grid(const Grid& g,
                           const std::function<double(std::array<double, 2>)>& v);
  static Potential time_dependent(Callback cb, double bound);

  Kind kind() const { return kind_; }
  bool is_free() const { return kind_ == Kind::free; }
  double bound() const { return bound_; }

  // Writes one value per grid point for time t into out (resized).
  void sample(const Grid& g, double t, std::vector<double>& out) const;
  const std::vector<double>& static_values() const { return values_; }

 private:
  Potential() = default;
  Kind kind_ = Kind::free;
  std::vector<double> values_;
  Callback callback_;
  double bound_ = 0;
};

}  // namespace slicesim
