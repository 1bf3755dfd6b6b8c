#pragma once

#include <string>

#include "speclab/linalg.hpp"
#include "speclab/parallel.hpp"
#include "speclab/types.hpp"

namespace speclab::pseudo {

struct GridSpec {
  double re_min = -1.0, re_max = 1.0;
  double im_min = -1.0, im_max = 1.0;
  Index nx = 2, ny = 2;

  void validate() const {
    if (nx < 2 || ny < 2) throw ConfigError("GridSpec: resolution must be at least 2x2");
    if (!(re_min < re_max) || !(im_min < im_max))
      throw ConfigError("GridSpec: rectangle must have positive extent");
  }

  [[nodiscard]] double re_at(Index ix) const {
    return re_min + (re_max - re_min) * static_cast<double>(ix) / static_cast<double>(nx - 1);
  }
  [[nodiscard]] double im_at(Index iy) const {
    return im_min + (im_max - im_min) * static_cast<double>(iy) / static_cast<double>(ny - 1);
  }
};

// sigma_min(A - z I) sampled on the rectangle; values(iy, ix) with the
// imaginary axis ascending across rows and the real axis across columns.
struct PseudospectrumGrid {
  GridSpec spec;
  RealMatrix values;  // ny x nx
};

[[nodiscard]] inline PseudospectrumGrid pseudospectrum_grid(const Matrix& a, const GridSpec& gs,
                                                            unsigned threads = 1) {
  require_square_finite(a, "pseudospectrum_grid");
  gs.validate();
  PseudospectrumGrid grid;
  grid.spec = gs;
  grid.values.resize(gs.ny, gs.nx);
  const auto nodes = static_cast<std::size_t>(gs.nx * gs.ny);
  parallel_for(nodes, threads, [&](std::size_t node) {
    const Index iy = static_cast<Index>(node) / gs.nx;
    const Index ix = static_cast<Index>(node) % gs.nx;
    Matrix shifted = a;
    shifted.diagonal().array() -= Complex(gs.re_at(ix), gs.im_at(iy));
    grid.values(iy, ix) = linalg::sigma_min(shifted);
  });
  return grid;
}

}  // namespace speclab::pseudo
