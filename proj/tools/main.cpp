#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "cct/cli.hpp"
#include "cct/io.hpp"
#include "cct/types.hpp"

namespace {

int emit(const cct::CommandResult& res, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << res.output;
    return res.exit_code;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) {
    std::cerr << "cannot open " << out_path << "\n";
    return 2;
  }
  os << res.output;
  return res.exit_code;
}

int fail(const std::string& code, const std::string& detail) {
  nlohmann::ordered_json j;
  j["ok"] = false;
  j["error"] = code;
  j["detail"] = detail;
  std::cout << j.dump(2) << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Characteristic functions, dilations and functional models of "
      "commuting contractive operator tuples"};
  app.require_subcommand(1);

  cct::RunConfig cfg;
  std::string out_path;
  std::string mode = "identities";
  std::vector<std::string> inputs;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--tol", cfg.tol, "certification tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--grid", cfg.grid_size, "number of random grid points")
        ->check(CLI::PositiveNumber);
    auto* radius =
        cmd->add_option("--radius", cfg.grid_radius, "sample radius in (0,1)")
            ->check(CLI::Range(1e-6, 1.0 - 1e-6));
    cmd->add_option("--seed", cfg.seed, "grid seed");
    cmd->add_option("--degree", cfg.truncation_N, "truncation degree")
        ->check(CLI::PositiveNumber);
    cmd->add_option("-o,--out", out_path,
                    "write the result to this file instead of stdout");
    return radius;
  };

  auto* report = app.add_subcommand(
      "report", "classification and certificate report for a tuple");
  report->add_option("input", inputs, "tuple JSON file")
      ->required()
      ->expected(1);
  auto* report_radius = add_common(report);

  auto* sample = app.add_subcommand(
      "sample-theta",
      "sample the characteristic function on a random grid, as CSV");
  sample->add_option("input", inputs, "tuple JSON file")
      ->required()
      ->expected(1);
  auto* sample_radius = add_common(sample);

  auto* verify = app.add_subcommand(
      "verify", "check one family of identities; exit 0 iff certified");
  verify->add_option("input", inputs, "tuple JSON file(s)")
      ->required()
      ->expected(1, 2);
  auto* verify_radius = add_common(verify);
  verify->add_option("--mode", mode, "identities|mobius|coincide|model|blh");

  CLI11_PARSE(app, argc, argv);

  try {
    cct::CommandResult res;
    if (report->parsed()) {
      cfg.radius_set = report_radius->count() > 0;
      res = cct::cmd_report(cct::read_file(inputs[0]), cfg);
    } else if (sample->parsed()) {
      cfg.radius_set = sample_radius->count() > 0;
      res = cct::cmd_sample_theta(cct::read_file(inputs[0]), cfg);
    } else {
      cfg.radius_set = verify_radius->count() > 0;
      std::vector<std::string> texts;
      texts.reserve(inputs.size());
      for (const auto& path : inputs) texts.push_back(cct::read_file(path));
      res = cct::cmd_verify(texts, mode, cfg);
    }
    return emit(res, out_path);
  } catch (const cct::Error& e) {
    return fail(e.code(), e.what());
  } catch (const std::exception& e) {
    return fail("Internal", e.what());
  }
}
