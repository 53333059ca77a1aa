#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "locsparse/io.hpp"
#include "locsparse/noise.hpp"
#include "locsparse/norms.hpp"
#include "locsparse/recovery.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool two_pass = false;
};

locsparse::RunConfig resolve_config(const CommonOptions& opts) {
  locsparse::RunConfig config;
  if (!opts.config_path.empty())
    config = locsparse::load_config(opts.config_path);
  if (opts.seed) config.seed = *opts.seed;
  if (opts.out_dir) config.out_dir = *opts.out_dir;
  return config;
}

fs::path ensure_out_dir(const locsparse::RunConfig& config) {
  fs::path dir(config.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_json(const fs::path& path, const json& j) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

locsparse::DataMatrix synthesize_or_load_data(
    const locsparse::RunConfig& config, const locsparse::ForwardOperator& a,
    const locsparse::DictionaryMatrix& b) {
  if (!config.w_path.empty())
    return locsparse::DataMatrix(locsparse::read_matrix(config.w_path));
  const locsparse::Phantom phantom = locsparse::build_phantom(config);
  return locsparse::add_gaussian_noise(
      locsparse::apply_forward(a, phantom.u_true, b), config.noise_sigma,
      config.seed);
}

json report_to_json(const locsparse::SolveReport& report) {
  json j;
  j["iterations"] = report.iterations;
  j["stop_reason"] = report.stop_reason == locsparse::StopReason::converged
                         ? "converged"
                         : "max_iter";
  j["objective"] = report.objective;
  j["final_lambda"] = report.final_lambda;
  j["final_mu"] = report.final_mu;
  j["final_tolerances"] = {report.final_tolerances.pri1,
                           report.final_tolerances.pri2,
                           report.final_tolerances.dual};
  json history = json::array();
  for (const auto& row : report.residual_history)
    history.push_back({row[0], row[1], row[2]});
  j["residual_history"] = std::move(history);
  json penalties = json::array();
  for (const auto& row : report.penalty_history)
    penalties.push_back({row[0], row[1]});
  j["penalty_history"] = std::move(penalties);
  return j;
}

int cmd_gen_dict(const CommonOptions& opts) {
  const locsparse::RunConfig config = resolve_config(opts);
  const fs::path dir = ensure_out_dir(config);
  const locsparse::DictionaryMatrix dict = locsparse::build_dictionary(config);
  locsparse::write_matrix(dir / "dict.lspm", dict.values);
  json meta;
  meta["normalization"] = locsparse::to_string(dict.normalization);
  meta["time_grid"] = std::vector<double>(
      dict.time_grid.data(), dict.time_grid.data() + dict.time_grid.size());
  const locsparse::DecayGrid decays = locsparse::log_decay_grid(
      config.atoms, config.decay_min, config.decay_max);
  meta["decays"] = std::vector<double>(
      decays.params.data(), decays.params.data() + decays.params.size());
  write_json(dir / "dict.meta.json", meta);
  std::cout << "wrote " << (dir / "dict.lspm").string() << "\n";
  return 0;
}

int cmd_gen_phantom(const CommonOptions& opts) {
  const locsparse::RunConfig config = resolve_config(opts);
  const fs::path dir = ensure_out_dir(config);
  const locsparse::Phantom phantom = locsparse::build_phantom(config);
  locsparse::write_matrix(dir / "phantom.lspm", phantom.u_true.values);
  json meta;
  meta["m1"] = phantom.spatial_shape.m1;
  meta["m2"] = phantom.spatial_shape.m2;
  meta["atoms"] = phantom.u_true.atom_count();
  meta["regions"] = phantom.regions.size();
  meta["max_row_sparsity"] = locsparse::norm_l0_inf(phantom.u_true);
  write_json(dir / "phantom.meta.json", meta);
  std::cout << "wrote " << (dir / "phantom.lspm").string() << "\n";
  return 0;
}

int cmd_forward(const CommonOptions& opts) {
  const locsparse::RunConfig config = resolve_config(opts);
  const fs::path dir = ensure_out_dir(config);
  const locsparse::DictionaryMatrix dict = locsparse::build_dictionary(config);
  const locsparse::ForwardOperator op = locsparse::build_operator(config);
  const locsparse::Phantom phantom = locsparse::build_phantom(config);
  const locsparse::DataMatrix w = locsparse::add_gaussian_noise(
      locsparse::apply_forward(op, phantom.u_true, dict), config.noise_sigma,
      config.seed);
  locsparse::write_matrix(dir / "w.lspm", w.values);
  std::cout << "wrote " << (dir / "w.lspm").string() << "\n";
  return 0;
}

int cmd_solve(const CommonOptions& opts) {
  const locsparse::RunConfig config = resolve_config(opts);
  const fs::path dir = ensure_out_dir(config);
  const locsparse::DictionaryMatrix dict = locsparse::build_dictionary(config);
  const locsparse::ForwardOperator op = locsparse::build_operator(config);
  const locsparse::DataMatrix w = synthesize_or_load_data(config, op, dict);

  auto [u, report] = locsparse::solve(op, dict, w, config.solver);
  if (!u.values.allFinite())
    throw std::runtime_error("solver produced non-finite iterates");
  locsparse::write_matrix(dir / "u.lspm", u.values);
  json j = report_to_json(report);

  if (opts.two_pass) {
    const locsparse::SupportMap support =
        locsparse::extract_support(u, config.support_rel_tol);
    const locsparse::CoefficientMatrix debiased =
        locsparse::debias_on_support(op, dict, w, support, config.solver);
    locsparse::write_matrix(dir / "u_debiased.lspm", debiased.values);
    j["two_pass"] = true;
    j["support_rel_tol"] = config.support_rel_tol;
  }
  write_json(dir / "report.json", j);
  std::cout << "wrote " << (dir / "u.lspm").string() << " ("
            << report.iterations << " iterations)\n";
  return 0;
}

int cmd_sweep(const CommonOptions& opts) {
  const locsparse::RunConfig config = resolve_config(opts);
  const fs::path dir = ensure_out_dir(config);
  const locsparse::DictionaryMatrix dict = locsparse::build_dictionary(config);
  const locsparse::ForwardOperator op = locsparse::build_operator(config);
  const locsparse::Phantom phantom = locsparse::build_phantom(config);
  const locsparse::SweepTable table = locsparse::sweep_v(
      op, dict, phantom, config.noise_sigma, config.seed, config.v_list,
      config.solver, config.support_rel_tol);
  locsparse::write_sweep_csv(dir / "sweep.csv", table);
  std::cout << "v_cap,wrong_pixel_percent,weighted_percent,iterations\n";
  for (const auto& row : table.rows)
    std::cout << row.v_cap << ',' << row.wrong_pixel_percent << ','
              << row.weighted_percent << ',' << row.iterations << "\n";
  std::cout << "wrote " << (dir / "sweep.csv").string() << "\n";
  return 0;
}

int cmd_analyze(const CommonOptions& opts) {
  const locsparse::RunConfig config = resolve_config(opts);
  const fs::path dir = ensure_out_dir(config);
  const locsparse::DictionaryMatrix dict = locsparse::build_dictionary(config);
  const locsparse::ForwardOperator op = locsparse::build_operator(config);
  const locsparse::Phantom phantom = locsparse::build_phantom(config);
  const locsparse::DataMatrix w = synthesize_or_load_data(config, op, dict);

  json j;
  j["dictionary"]["atoms"] = dict.atom_count();
  j["dictionary"]["normalization"] = locsparse::to_string(dict.normalization);
  j["dictionary"]["mutual_incoherence"] =
      dict.atom_count() >= 2 ? locsparse::mutual_incoherence(dict) : 0.0;

  std::vector<locsparse::Index> used;
  for (locsparse::Index i = 0; i < phantom.u_true.pixel_count(); ++i)
    for (locsparse::Index a = 0; a < phantom.u_true.atom_count(); ++a)
      if (phantom.u_true.values(i, a) > 0.0) used.push_back(a);
  const locsparse::ScalingReport scaling =
      locsparse::check_scaling_condition(dict, used);
  j["scaling_condition"]["satisfied"] = scaling.satisfied;
  json violations = json::array();
  for (size_t k = 0; k < scaling.violations.size() && k < 20; ++k) {
    const auto& v = scaling.violations[k];
    violations.push_back(
        {{"column", v.column}, {"other", v.other}, {"value", v.value}});
  }
  j["scaling_condition"]["violations"] = std::move(violations);
  j["scaling_condition"]["violation_count"] = scaling.violations.size();

  const locsparse::SupportMap predicted =
      locsparse::predict_asymptotic_support(op, w, dict, 0.0);
  std::vector<int> histogram(static_cast<size_t>(dict.atom_count()), 0);
  for (locsparse::Index arg : predicted.argmax)
    if (arg >= 0) ++histogram[static_cast<size_t>(arg)];
  j["asymptotic_support"]["argmax_histogram"] = histogram;

  if (op.in_dim() <= 1024) {
    const locsparse::SourceConditionReport source =
        locsparse::check_source_condition(phantom.u_true, op, dict, 1e-8);
    j["source_condition"]["satisfied"] = source.satisfied;
    j["source_condition"]["residual"] = source.residual;
    j["source_condition"]["iterations"] = source.iterations;
  } else {
    j["source_condition"]["skipped"] = "problem too large for dense search";
  }

  write_json(dir / "analysis.json", j);
  std::cout << j.dump(2) << "\n";
  std::cout << "wrote " << (dir / "analysis.json").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"locally sparse coefficient reconstruction"};
  app.require_subcommand(1);

  CommonOptions opts;
  auto add_common = [&](CLI::App* cmd, bool with_two_pass = false) {
    cmd->add_option("--config", opts.config_path, "config file path");
    cmd->add_option("--seed", opts.seed, "64-bit experiment seed");
    cmd->add_option("--out", opts.out_dir, "output directory");
    if (with_two_pass)
      cmd->add_flag("--two-pass", opts.two_pass,
                    "debias on the recovered support after the first run");
  };

  CLI::App* gen_dict = app.add_subcommand(
      "gen-dict", "generate the kinetic dictionary and write it");
  CLI::App* gen_phantom =
      app.add_subcommand("gen-phantom", "rasterize the phantom coefficients");
  CLI::App* forward = app.add_subcommand(
      "forward", "synthesize data W = A U B^T (plus seeded noise)");
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "run the ADMM reconstruction");
  CLI::App* sweep =
      app.add_subcommand("sweep", "solve across the configured cap list");
  CLI::App* analyze = app.add_subcommand(
      "analyze", "dictionary and recovery-condition diagnostics");
  add_common(gen_dict);
  add_common(gen_phantom);
  add_common(forward);
  add_common(solve_cmd, /*with_two_pass=*/true);
  add_common(sweep);
  add_common(analyze);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_dict->parsed()) return cmd_gen_dict(opts);
    if (gen_phantom->parsed()) return cmd_gen_phantom(opts);
    if (forward->parsed()) return cmd_forward(opts);
    if (solve_cmd->parsed()) return cmd_solve(opts);
    if (sweep->parsed()) return cmd_sweep(opts);
    if (analyze->parsed()) return cmd_analyze(opts);
  } catch (const locsparse::ContractViolation& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  }
  return 0;
}
