#include "locsparse/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace locsparse {

static_assert(std::endian::native == std::endian::little,
              "LSPM writer assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'L', 'S', 'P', 'M'};
constexpr std::uint16_t kVersion = 1;

void rename_into_place(const std::filesystem::path& tmp,
                       const std::filesystem::path& path) {
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("io: rename failed for " + path.string());
  }
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream stream(s);
  std::string item;
  while (std::getline(stream, item, sep)) parts.push_back(trim(item));
  return parts;
}

}  // namespace

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  require(m.rows() >= 0 && m.cols() >= 0, "write_matrix: bad shape");
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("io: cannot open " + tmp.string());
    out.write(kMagic, 4);
    const std::uint16_t version = kVersion;
    const std::uint32_t rows = static_cast<std::uint32_t>(m.rows());
    const std::uint32_t cols = static_cast<std::uint32_t>(m.cols());
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
    out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                        Eigen::RowMajor>
        row_major = m;
    out.write(reinterpret_cast<const char*>(row_major.data()),
              static_cast<std::streamsize>(sizeof(double) * m.size()));
    if (!out) throw std::runtime_error("io: write failed " + tmp.string());
  }
  rename_into_place(tmp, path);
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("io: cannot open " + path.string());
  char magic[4];
  std::uint16_t version = 0;
  std::uint32_t rows = 0, cols = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
  if (!in || std::memcmp(magic, kMagic, 4) != 0 || version != kVersion)
    throw std::runtime_error("io: not an LSPM v1 file: " + path.string());
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      row_major(rows, cols);
  in.read(reinterpret_cast<char*>(row_major.data()),
          static_cast<std::streamsize>(sizeof(double) * row_major.size()));
  if (!in) throw std::runtime_error("io: truncated file " + path.string());
  return Matrix(row_major);
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("io: cannot open " + tmp.string());
    out.precision(17);
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) {
        if (j) out << ',';
        out << m(i, j);
      }
      out << '\n';
    }
  }
  rename_into_place(tmp, path);
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("io: cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> row;
    for (const std::string& cell : split(line, ','))
      row.push_back(std::stod(cell));
    if (!rows.empty() && rows.back().size() != row.size())
      throw std::runtime_error("io: ragged CSV " + path.string());
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Index>(rows.size()),
           rows.empty() ? 0 : static_cast<Index>(rows[0].size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return m;
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[problem]\n";
  out << "m1 = " << c.m1 << "\n";
  out << "m2 = " << c.m2 << "\n\n";
  out << "[dictionary]\n";
  out << "atoms = " << c.atoms << "\n";
  out << "decay_min = " << format_double(c.decay_min) << "\n";
  out << "decay_max = " << format_double(c.decay_max) << "\n";
  out << "samples = " << c.samples << "\n";
  out << "t_end = " << format_double(c.t_end) << "\n";
  out << "tau0 = " << format_double(c.tau0) << "\n";
  out << "normalization = " << c.normalization << "\n\n";
  out << "[operator]\n";
  out << "kind = " << c.operator_kind << "\n";
  out << "sigma = " << format_double(c.kernel_sigma) << "\n";
  out << "dense_path = " << c.dense_path << "\n\n";
  out << "[phantom]\n";
  out << "preset = " << c.phantom_preset << "\n";
  out << "regions = " << c.regions << "\n\n";
  out << "[noise]\n";
  out << "sigma = " << format_double(c.noise_sigma) << "\n\n";
  out << "[solver]\n";
  out << "v_cap = " << format_double(c.solver.v_cap) << "\n";
  out << "beta = " << format_double(c.solver.beta) << "\n";
  out << "lambda0 = " << format_double(c.solver.lambda0) << "\n";
  out << "mu0 = " << format_double(c.solver.mu0) << "\n";
  out << "eps_abs = " << format_double(c.solver.eps_abs) << "\n";
  out << "eps_rel = " << format_double(c.solver.eps_rel) << "\n";
  out << "eta1 = " << format_double(c.solver.eta1) << "\n";
  out << "eta2 = " << format_double(c.solver.eta2) << "\n";
  out << "tau1 = " << format_double(c.solver.tau1) << "\n";
  out << "tau2 = " << format_double(c.solver.tau2) << "\n";
  out << "max_iter = " << c.solver.max_iter << "\n";
  out << "adapt_freeze_iter = " << c.solver.adapt_freeze_iter << "\n";
  out << "support_rel_tol = " << format_double(c.support_rel_tol) << "\n\n";
  out << "[sweep]\n";
  out << "v_list = ";
  for (size_t k = 0; k < c.v_list.size(); ++k) {
    if (k) out << ",";
    out << format_double(c.v_list[k]);
  }
  out << "\n\n";
  out << "[data]\n";
  out << "w_path = " << c.w_path << "\n\n";
  out << "[run]\n";
  out << "seed = " << c.seed << "\n";
  out << "out_dir = " << c.out_dir << "\n";
  return out.str();
}

RunConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line, section;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ContractViolation("config: expected key = value, got: " + line);
    const std::string key = trim(line.substr(0, eq));
    if (section.empty() || key.empty())
      throw ContractViolation("config: key outside a section: " + line);
    kv[section + "." + key] = trim(line.substr(eq + 1));
  }

  RunConfig c;
  auto str = [&](const char* key, std::string& out) {
    if (auto it = kv.find(key); it != kv.end()) out = it->second;
  };
  auto num = [&](const char* key, double& out) {
    if (auto it = kv.find(key); it != kv.end()) {
      try {
        out = std::stod(it->second);
      } catch (const std::exception&) {
        throw ContractViolation(std::string("config: bad number for ") + key);
      }
    }
  };
  auto integer = [&](const char* key, auto& out) {
    if (auto it = kv.find(key); it != kv.end()) {
      try {
        out = static_cast<std::remove_reference_t<decltype(out)>>(
            std::stoll(it->second));
      } catch (const std::exception&) {
        throw ContractViolation(std::string("config: bad integer for ") + key);
      }
    }
  };

  integer("problem.m1", c.m1);
  integer("problem.m2", c.m2);
  integer("dictionary.atoms", c.atoms);
  num("dictionary.decay_min", c.decay_min);
  num("dictionary.decay_max", c.decay_max);
  integer("dictionary.samples", c.samples);
  num("dictionary.t_end", c.t_end);
  num("dictionary.tau0", c.tau0);
  str("dictionary.normalization", c.normalization);
  str("operator.kind", c.operator_kind);
  num("operator.sigma", c.kernel_sigma);
  str("operator.dense_path", c.dense_path);
  str("phantom.preset", c.phantom_preset);
  str("phantom.regions", c.regions);
  num("noise.sigma", c.noise_sigma);
  num("solver.v_cap", c.solver.v_cap);
  num("solver.beta", c.solver.beta);
  num("solver.lambda0", c.solver.lambda0);
  num("solver.mu0", c.solver.mu0);
  num("solver.eps_abs", c.solver.eps_abs);
  num("solver.eps_rel", c.solver.eps_rel);
  num("solver.eta1", c.solver.eta1);
  num("solver.eta2", c.solver.eta2);
  num("solver.tau1", c.solver.tau1);
  num("solver.tau2", c.solver.tau2);
  integer("solver.max_iter", c.solver.max_iter);
  integer("solver.adapt_freeze_iter", c.solver.adapt_freeze_iter);
  num("solver.support_rel_tol", c.support_rel_tol);
  if (auto it = kv.find("sweep.v_list"); it != kv.end()) {
    c.v_list.clear();
    for (const std::string& cell : split(it->second, ','))
      if (!cell.empty()) c.v_list.push_back(std::stod(cell));
  }
  str("data.w_path", c.w_path);
  integer("run.seed", c.seed);
  str("run.out_dir", c.out_dir);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("config: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

DictionaryMatrix build_dictionary(const RunConfig& config) {
  require(config.samples >= 2, "config: dictionary.samples must be >= 2");
  const Vector grid = Vector::LinSpaced(config.samples, 0.0, config.t_end);
  const InputCurve curve = gamma_variate_curve(grid, config.tau0);
  const DecayGrid decays =
      log_decay_grid(config.atoms, config.decay_min, config.decay_max);
  DictionaryMatrix b = build_kinetic_dictionary(curve, decays, grid);
  if (config.normalization == "l2")
    return normalize_columns(b, Normalization::l2);
  if (config.normalization == "l1")
    return normalize_columns(b, Normalization::l1);
  if (config.normalization == "raw") return b;
  throw ContractViolation("config: unknown normalization " +
                          config.normalization);
}

ForwardOperator build_operator(const RunConfig& config) {
  const SpatialShape shape{config.m1, config.m2};
  if (config.operator_kind == "identity")
    return ForwardOperator::Identity(shape.pixel_count(), shape);
  if (config.operator_kind == "gaussian")
    return ForwardOperator::Conv2d(gaussian_kernel(config.kernel_sigma),
                                   shape);
  if (config.operator_kind == "dense") {
    if (config.dense_path.empty())
      throw ContractViolation("config: operator.dense_path missing");
    return ForwardOperator::Dense(read_matrix(config.dense_path));
  }
  throw ContractViolation("config: unknown operator kind " +
                          config.operator_kind);
}

std::vector<Region> parse_regions(const std::string& spec) {
  std::vector<Region> regions;
  for (const std::string& chunk : split(spec, ';')) {
    if (chunk.empty()) continue;
    const auto colon = chunk.find(':');
    if (colon == std::string::npos)
      throw ContractViolation("config: region needs shape: " + chunk);
    const std::string shape = trim(chunk.substr(0, colon));
    const std::vector<std::string> args = split(chunk.substr(colon + 1), ',');
    Region region;
    if (shape == "disk") {
      if (args.size() != 5)
        throw ContractViolation("config: disk:cy,cx,r,basis,value");
      region = {RegionShape::disk, std::stod(args[0]), std::stod(args[1]),
                0.0, std::stod(args[2]),
                static_cast<Index>(std::stoll(args[3])), std::stod(args[4])};
    } else if (shape == "annulus") {
      if (args.size() != 6)
        throw ContractViolation("config: annulus:cy,cx,rin,rout,basis,value");
      region = {RegionShape::annulus, std::stod(args[0]), std::stod(args[1]),
                std::stod(args[2]), std::stod(args[3]),
                static_cast<Index>(std::stoll(args[4])), std::stod(args[5])};
    } else if (shape == "rect") {
      if (args.size() != 6)
        throw ContractViolation("config: rect:r0,c0,r1,c1,basis,value");
      region = {RegionShape::rectangle, std::stod(args[0]), std::stod(args[1]),
                std::stod(args[2]), std::stod(args[3]),
                static_cast<Index>(std::stoll(args[4])), std::stod(args[5])};
    } else {
      throw ContractViolation("config: unknown region shape " + shape);
    }
    regions.push_back(region);
  }
  return regions;
}

Phantom build_phantom(const RunConfig& config) {
  if (config.phantom_preset == "default")
    return default_phantom(config.m1, config.m2, config.atoms);
  if (config.phantom_preset == "custom")
    return make_phantom(config.m1, config.m2, parse_regions(config.regions),
                        config.atoms);
  throw ContractViolation("config: unknown phantom preset " +
                          config.phantom_preset);
}

void write_sweep_csv(const std::filesystem::path& path,
                     const SweepTable& table) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("io: cannot open " + tmp.string());
    out.precision(17);
    out << "v_cap,wrong_pixel_percent,weighted_percent,iterations\n";
    for (const SweepRow& row : table.rows)
      out << row.v_cap << ',' << row.wrong_pixel_percent << ','
          << row.weighted_percent << ',' << row.iterations << '\n';
  }
  rename_into_place(tmp, path);
}

}  // namespace locsparse
