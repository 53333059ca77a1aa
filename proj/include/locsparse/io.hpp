#ifndef LOCSPARSE_IO_HPP_
#define LOCSPARSE_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "locsparse/dictionary.hpp"
#include "locsparse/experiments.hpp"
#include "locsparse/forward.hpp"
#include "locsparse/solver.hpp"
#include "locsparse/types.hpp"

namespace locsparse {

// Matrix container: magic "LSPM", u16 version, u32 rows, u32 cols, then
// row-major little-endian f64. Writes go through a temp file + rename.
void write_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix(const std::filesystem::path& path);

// CSV interop (17 significant digits, comma separated).
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_csv(const std::filesystem::path& path);

// Everything a run needs, mirrored 1:1 by the sectioned key=value config
// file; parse(serialize(c)) == c.
struct RunConfig {
  // [problem]
  Index m1 = 64;
  Index m2 = 64;
  // [dictionary]
  Index atoms = 8;
  double decay_min = 0.05;
  double decay_max = 3.0;
  Index samples = 60;
  double t_end = 60.0;
  double tau0 = 8.0;
  std::string normalization = "l2";
  // [operator]
  std::string operator_kind = "gaussian";  // identity | gaussian | dense
  double kernel_sigma = 1.3;
  std::string dense_path;
  // [phantom]
  std::string phantom_preset = "default";  // default | custom
  std::string regions;  // custom: "disk:cy,cx,r,basis,value;..."
  // [noise]
  double noise_sigma = 0.0;
  // [solver]
  SolverParams solver{.v_cap = 0.01};
  double support_rel_tol = 1e-3;
  // [sweep]
  std::vector<double> v_list = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  // [data]
  std::string w_path;
  // [run]
  std::uint64_t seed = 0;
  std::string out_dir = "out";

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& config);
RunConfig load_config(const std::filesystem::path& path);

// Config materialization used by the CLI and the experiment harness.
DictionaryMatrix build_dictionary(const RunConfig& config);
ForwardOperator build_operator(const RunConfig& config);
Phantom build_phantom(const RunConfig& config);
std::vector<Region> parse_regions(const std::string& spec);

void write_sweep_csv(const std::filesystem::path& path,
                     const SweepTable& table);

}  // namespace locsparse

#endif  // LOCSPARSE_IO_HPP_
