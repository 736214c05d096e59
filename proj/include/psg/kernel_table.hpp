#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "psg/model.hpp"

namespace psg {

/// Convolution weights of K on a grid. Since K depends on (x - xi, t - tau)
/// only, one row per time lag and one column per spatial offset suffices:
///   weight(p, d) = int K(d dx - y, p dt) hat(y) dy
/// with hat the piecewise-linear basis function of half-width dx. Row 0 is
/// zero because K(., 0) = 0. Columns past the kernel's support are dropped.
class KernelTable {
 public:
  KernelTable(const MediumParams& params, const SpaceTimeGrid& grid, unsigned threads = 1);

  const MediumParams& params() const noexcept { return params_; }
  const SpaceTimeGrid& grid() const noexcept { return grid_; }

  /// Largest spatial offset kept.
  std::size_t max_offset() const noexcept { return width_ - 1; }

  double weight(std::size_t lag, std::size_t offset) const {
    return offset < width_ ? weights_[lag * width_ + offset] : 0.0;
  }
  std::span<const double> row(std::size_t lag) const { return {weights_.data() + lag * width_, width_}; }

  /// Sum over all offsets of row `lag`, i.e. the discrete kernel mass.
  double row_mass(std::size_t lag) const;

 private:
  MediumParams params_;
  SpaceTimeGrid grid_;
  std::size_t width_ = 0;
  std::vector<double> weights_;
};

}  // namespace psg
