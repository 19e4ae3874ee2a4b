#pragma once

#include "foldlab/table.hpp"

#include <cmath>
#include <vector>

namespace foldlab {

/// Regular grid over the bounding box of U, odd point count per axis so the
/// center of U is a grid node.
template <typename Scalar>
struct BoxGrid {
  int n = 0;
  int per_axis = 0;
  VectorX<Scalar> lower;
  Scalar spacing = 0;

  long size() const {
    long s = 1;
    for (int i = 0; i < n; ++i) s *= per_axis;
    return s;
  }

  std::vector<int> cell(long flat) const {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      idx[static_cast<std::size_t>(i)] = static_cast<int>(flat % per_axis);
      flat /= per_axis;
    }
    return idx;
  }

  long flat(const std::vector<int>& idx) const {
    long f = 0;
    for (int i = n - 1; i >= 0; --i) f = f * per_axis + idx[static_cast<std::size_t>(i)];
    return f;
  }

  VectorX<Scalar> point(long flat_index) const {
    const auto idx = cell(flat_index);
    VectorX<Scalar> x(n);
    for (int i = 0; i < n; ++i) x(i) = lower(i) + spacing * Scalar(idx[static_cast<std::size_t>(i)]);
    return x;
  }
};

template <typename Scalar>
BoxGrid<Scalar> region_grid(const Region<Scalar>& region, int per_axis, long max_points = 250000) {
  require(per_axis >= 2, ErrorKind::Config, "grid needs at least two points per axis");
  const int n = static_cast<int>(region.center.size());
  int m = per_axis;
  while (m > 3 && std::pow(double(m), double(n)) > double(max_points)) --m;
  if (m % 2 == 0) --m;
  BoxGrid<Scalar> grid;
  grid.n = n;
  grid.per_axis = m;
  grid.spacing = Scalar(2) * region.radius / Scalar(m - 1);
  grid.lower = region.center.array() - region.radius;
  return grid;
}

/// Grid nodes of U with f >= min_f.
template <typename Scalar>
std::vector<VectorX<Scalar>> table_grid_points(const TableSpec<Scalar>& table, int per_axis, Scalar min_f = 0,
                                               long max_points = 250000) {
  const BoxGrid<Scalar> grid = region_grid(table.region(), per_axis, max_points);
  std::vector<VectorX<Scalar>> out;
  for (long i = 0; i < grid.size(); ++i) {
    VectorX<Scalar> x = grid.point(i);
    if (table.in_region(x) && table.value(x) >= min_f) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace foldlab
