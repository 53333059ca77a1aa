#include "locsparse/experiments.hpp"

#include <cmath>

#include "locsparse/noise.hpp"
#include "locsparse/recovery.hpp"

namespace locsparse {
namespace {

bool region_contains(const Region& region, Index r, Index c) {
  const double y = static_cast<double>(r);
  const double x = static_cast<double>(c);
  switch (region.shape) {
    case RegionShape::disk: {
      const double d2 = (y - region.cy) * (y - region.cy) +
                        (x - region.cx) * (x - region.cx);
      return d2 <= region.r_outer * region.r_outer;
    }
    case RegionShape::annulus: {
      const double d2 = (y - region.cy) * (y - region.cy) +
                        (x - region.cx) * (x - region.cx);
      return d2 > region.r_inner * region.r_inner &&
             d2 <= region.r_outer * region.r_outer;
    }
    case RegionShape::rectangle:
      return y >= region.cy && y < region.r_inner && x >= region.cx &&
             x < region.r_outer;
  }
  return false;
}

}  // namespace

Phantom make_phantom(Index m1, Index m2, const std::vector<Region>& regions,
                     Index atom_count) {
  require(m1 >= 1 && m2 >= 1 && atom_count >= 1, "make_phantom: bad shape");
  for (const Region& region : regions) {
    require(region.basis_index >= 0 && region.basis_index < atom_count,
            "make_phantom: basis index out of range");
    require(region.value > 0.0, "make_phantom: region value must be > 0");
  }
  Matrix values = Matrix::Zero(m1 * m2, atom_count);
  std::vector<Index> label(static_cast<size_t>(m1 * m2), Index(-1));
  for (const Region& region : regions) {
    for (Index r = 0; r < m1; ++r) {
      for (Index c = 0; c < m2; ++c) {
        if (!region_contains(region, r, c)) continue;
        const Index pixel = r * m2 + c;
        const Index prev = label[static_cast<size_t>(pixel)];
        if (prev >= 0 && prev != region.basis_index)
          throw ContractViolation(
              "make_phantom: overlapping regions with different basis "
              "indices");
        if (prev >= 0) values(pixel, prev) = 0.0;
        values(pixel, region.basis_index) = region.value;
        label[static_cast<size_t>(pixel)] = region.basis_index;
      }
    }
  }
  Phantom phantom;
  phantom.spatial_shape = {m1, m2};
  phantom.u_true =
      CoefficientMatrix(std::move(values), phantom.spatial_shape, true);
  phantom.regions = regions;
  return phantom;
}

Phantom default_phantom(Index m1, Index m2, Index atom_count) {
  require(atom_count >= 7, "default_phantom: needs at least 7 atoms");
  const double cy = (static_cast<double>(m1) - 1.0) / 2.0;
  const double cx = (static_cast<double>(m2) - 1.0) / 2.0;
  const double unit = static_cast<double>(std::min(m1, m2));
  std::vector<Region> regions;
  regions.push_back(
      {RegionShape::disk, cy, cx, 0.0, 0.22 * unit, Index(1), 0.5});
  regions.push_back(
      {RegionShape::annulus, cy, cx, 0.30 * unit, 0.42 * unit, Index(6), 1.0});
  return make_phantom(m1, m2, regions, atom_count);
}

SupportErrorReport support_error(const CoefficientMatrix& u_rec,
                                 const Phantom& phantom, double rel_tol) {
  const Matrix& truth = phantom.u_true.values;
  require(u_rec.values.rows() == truth.rows() &&
              u_rec.values.cols() == truth.cols(),
          "support_error: shape mismatch");
  const SupportMap recovered = extract_support(u_rec.values, rel_tol);

  SupportErrorReport report;
  double weighted = 0.0;
  for (Index i = 0; i < truth.rows(); ++i) {
    Index true_label = -1;
    for (Index j = 0; j < truth.cols(); ++j)
      if (truth(i, j) > 0.0) true_label = j;
    const Index rec_label = recovered.argmax[static_cast<size_t>(i)];
    if (true_label == rec_label) continue;
    ++report.wrong_count;
    if (true_label >= 0 && rec_label >= 0)
      weighted += static_cast<double>(std::abs(true_label - rec_label));
    else
      weighted += 1.0;  // background confusions weigh 1
  }
  const double m = static_cast<double>(truth.rows());
  report.percent = 100.0 * static_cast<double>(report.wrong_count) / m;
  report.weighted_percent = 100.0 * weighted / m;
  return report;
}

SweepTable sweep_v(const ForwardOperator& a, const DictionaryMatrix& b,
                   const Phantom& phantom, double sigma, std::uint64_t seed,
                   const std::vector<double>& v_list,
                   const SolverParams& params, double support_rel_tol) {
  require(!v_list.empty(), "sweep_v: empty cap list");
  for (size_t k = 0; k + 1 < v_list.size(); ++k)
    require(v_list[k] > v_list[k + 1],
            "sweep_v: caps must be strictly decreasing");

  const DataMatrix w =
      add_gaussian_noise(apply_forward(a, phantom.u_true, b), sigma, seed);

  SweepTable table;
  table.rows.reserve(v_list.size());
  for (double v_cap : v_list) {
    SolverParams run_params = params;
    run_params.v_cap = v_cap;
    auto [u, solve_report] = solve(a, b, w, run_params);
    const SupportErrorReport err = support_error(u, phantom, support_rel_tol);
    table.rows.push_back(
        {v_cap, err.percent, err.weighted_percent, solve_report.iterations});
  }
  return table;
}

}  // namespace locsparse
