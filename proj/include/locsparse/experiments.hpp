#ifndef LOCSPARSE_EXPERIMENTS_HPP_
#define LOCSPARSE_EXPERIMENTS_HPP_

#include <cstdint>
#include <vector>

#include "locsparse/dictionary.hpp"
#include "locsparse/forward.hpp"
#include "locsparse/solver.hpp"
#include "locsparse/types.hpp"

namespace locsparse {

enum class RegionShape { disk, annulus, rectangle };

// Geometry in pixel coordinates (row, col). disk: center + r_outer;
// annulus: center + (r_inner, r_outer]; rectangle: half-open
// [r0, r1) x [c0, c1) stored in (cy,cx)=(r0,c0), (r_inner,r_outer)=(r1,c1).
struct Region {
  RegionShape shape = RegionShape::disk;
  double cy = 0.0, cx = 0.0;
  double r_inner = 0.0, r_outer = 0.0;
  Index basis_index = 0;
  double value = 1.0;
};

struct Phantom {
  CoefficientMatrix u_true;
  std::vector<Region> regions;
  SpatialShape spatial_shape;
};

// Deterministic rasterization; every pixel ends up 0- or 1-sparse.
// Overlapping regions with different basis indices are rejected.
Phantom make_phantom(Index m1, Index m2, const std::vector<Region>& regions,
                     Index atom_count);

// Centered disk on atom 1 (value 0.5) inside an annulus on atom 6
// (value 1.0) of an 8-atom dictionary; radii scale with the grid.
Phantom default_phantom(Index m1, Index m2, Index atom_count = 8);

struct SupportErrorReport {
  double percent = 0.0;           // wrongly labeled pixels / M * 100
  double weighted_percent = 0.0;  // wrong atoms weighted by index distance
  Index wrong_count = 0;
};

// Per-pixel label = row argmax when the row is active at rel_tol, else
// background; mislabeled foreground pixels weigh |j_true - j_rec|,
// background confusions weigh 1.
SupportErrorReport support_error(const CoefficientMatrix& u_rec,
                                 const Phantom& phantom, double rel_tol);

struct SweepRow {
  double v_cap = 0.0;
  double wrong_pixel_percent = 0.0;
  double weighted_percent = 0.0;
  int iterations = 0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

// Synthesizes W = A U B^T (+ seeded noise) once, then solves per cap in
// v_list (strictly decreasing) and scores the first-pass support.
SweepTable sweep_v(const ForwardOperator& a, const DictionaryMatrix& b,
                   const Phantom& phantom, double sigma, std::uint64_t seed,
                   const std::vector<double>& v_list,
                   const SolverParams& params, double support_rel_tol = 1e-3);

}  // namespace locsparse

#endif  // LOCSPARSE_EXPERIMENTS_HPP_
