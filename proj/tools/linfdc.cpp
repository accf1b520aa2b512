// linfdc: command-line front end.
//
//   linfdc check --spec group.cfg
//   linfdc run <experiment> --spec group.cfg [--radius k] [--scales 1,2,4] [--cap n] [--out dir] [--seed s]
//   linfdc export-dot <tree file> [--out file]
//
// Exit codes: 0 pass, 1 verification failure, 2 cap exceeded, 3 input error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "linfdc/cli/experiments.hpp"
#include "linfdc/cli/spec.hpp"
#include "linfdc/io/text_format.hpp"

namespace fs = std::filesystem;
using namespace linfdc;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

cli::GroupSpec load_spec(const std::string& path) {
  try {
    return cli::parse_spec(read_file(path));
  } catch (const io::ParseError& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite decomposition complexity witnesses for linear groups over F_p(t)"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_dir;
  std::optional<std::size_t> radius;
  std::optional<std::size_t> cap;
  std::vector<std::int64_t> scales;
  std::uint64_t seed = 1;

  auto* check = app.add_subcommand("check", "Parse and validate a spec; print its canonical form");
  check->add_option("--spec", spec_path, "Spec file")->required()->check(CLI::ExistingFile);

  std::string experiment;
  auto* run = app.add_subcommand("run", "Run an experiment and emit a JSON report");
  run->add_option("experiment", experiment, "Experiment name")
      ->required()
      ->check(CLI::IsMember(cli::experiment_names()));
  run->add_option("--spec", spec_path, "Spec file")->required()->check(CLI::ExistingFile);
  run->add_option("--radius", radius, "Word radius of the window");
  run->add_option("--scales", scales, "Scale ladder, e.g. 1,2,4")->delimiter(',');
  run->add_option("--cap", cap, "Maximum number of points per window");
  run->add_option("--out", out_dir, "Directory for the report and referenced files");
  run->add_option("--seed", seed, "Seed for randomized sample suites");

  std::string tree_path;
  auto* dot = app.add_subcommand("export-dot", "Render a tree file as Graphviz DOT");
  dot->add_option("tree", tree_path, "Tree file")->required()->check(CLI::ExistingFile);
  dot->add_option("--out", out_dir, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::exit_input_error;
  }

  try {
    if (*check) {
      const auto spec = load_spec(spec_path);
      std::cout << "# spec hash " << cli::spec_hash(spec) << "\n" << cli::serialize_spec(spec);
      return cli::exit_pass;
    }
    if (*run) {
      const auto spec = load_spec(spec_path);
      cli::RunOptions opt;
      opt.radius = radius;
      opt.cap = cap;
      if (!scales.empty()) {
        for (auto r : scales) {
          if (r < 0) throw std::invalid_argument("scales must be nonnegative");
        }
        opt.scales = scales;
      }
      opt.seed = seed;
      const auto report = cli::run_experiment(spec, experiment, opt);
      const std::string json = report.json.dump(2) + "\n";
      if (out_dir.empty()) {
        std::cout << json;
      } else {
        const fs::path dir(out_dir);
        write_file(dir / (experiment + ".json"), json);
        for (const auto& [rel, content] : report.files) write_file(dir / rel, content);
        std::cerr << experiment << ": " << report.json["status"].get<std::string>() << " -> "
                  << (dir / (experiment + ".json")).string() << "\n";
      }
      return report.exit_code;
    }
    if (*dot) {
      const auto tree = io::tree_from_text(read_file(tree_path));
      const std::string text = io::to_dot(tree);
      if (out_dir.empty()) {
        std::cout << text;
      } else {
        write_file(out_dir, text);
      }
      return cli::exit_pass;
    }
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::exit_input_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::exit_input_error;
  } catch (const WindowCapExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return cli::exit_budget_exceeded;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::exit_input_error;
  }
  return cli::exit_pass;
}
