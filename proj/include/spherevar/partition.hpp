#pragma once

#include <span>
#include <vector>

#include "spherevar/rng.hpp"

namespace spherevar {

// One cell of a zonal equal-area partition: a theta band crossed with an
// azimuth arc (full circle for the polar caps).
struct Cell {
  double theta1, theta2;  // polar interval, 0 <= theta1 < theta2 <= pi
  double alpha1, alpha2;  // azimuth arc, alpha2 - alpha1 in (0, 2 pi]
  int index;

  double area() const;      // normalised, equals 1/N by construction
  double diameter() const;  // exact geodesic diameter
};

// Equal-area partition of S^2 into N cells: two polar caps of area 1/N plus
// collars subdivided into equal azimuth arcs.  Collar boundaries are
// re-leveled after the per-collar cell counts are fixed, so every cell has
// normalised area exactly 1/N.  Max cell diameter is O(N^{-1/2}); the suite
// checks the empirical constant 7 (geodesic diameter <= 7 N^{-1/2}).
class ZonalPartition {
 public:
  explicit ZonalPartition(int n_cells);

  int size() const { return n_; }
  const Cell& cell(int i) const { return cells_[i]; }
  const std::vector<Cell>& cells() const { return cells_; }

  // Index of the cell containing p (unit vector in R^3).  Total on the
  // sphere; bands are located by binary search on z = p[2], then the arc by
  // division.  Cells are half-open toward growing theta and alpha.
  int locate(std::span<const double> p) const;

  // Exact draw from the uniform distribution on cell `index`: cos(theta)
  // uniform on the cell's z-range, azimuth uniform on the arc.  The caller's
  // stream is advanced by exactly two draws.
  void sample_in_cell(int index, RandomStream& rng, std::span<double> out) const;

  double max_diameter() const;

 private:
  int n_;
  std::vector<Cell> cells_;
  // Band b spans z in [band_z_[b+1], band_z_[b]); band 0 owns z = 1.
  std::vector<double> band_z_;
  std::vector<int> band_first_;  // first cell index of each band
  std::vector<int> band_count_;  // arcs per band
};

}  // namespace spherevar
