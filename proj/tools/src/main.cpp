#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "preciseum/serialize.hpp"
#include "preciseum_demo/demo.hpp"

namespace demo = preciseum::demo;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInternal = 1;

demo::MatmulInputs load_pair(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw demo::UsageError("cannot open " + path);
  demo::MatmulInputs pair{preciseum::load(in), preciseum::load(in)};
  return pair;
}

void save_pair(const demo::MatmulInputs& pair, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw demo::UsageError("cannot write " + path);
  preciseum::save(pair.a, out);
  preciseum::save(pair.b, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Precision-tracking arithmetic demos"};
  app.require_subcommand(1);
  bool json = false;
  std::uint64_t seed = 42;
  app.add_flag("--json", json, "Emit JSON instead of a text table");
  app.add_option("--seed", seed, "Seed for every random choice");

  std::string a = "1", b = "1000", c = "-2e-11", method = "both";
  auto* quadratic = app.add_subcommand("quadratic", "Roots of a x^2 + b x + c = 0");
  quadratic->add_option("--a", a, "Leading coefficient (decimal)");
  quadratic->add_option("--b", b, "Linear coefficient (decimal)");
  quadratic->add_option("--c", c, "Constant term (decimal)");
  quadratic->add_option("--method", method, "naive, stable or both")
      ->check(CLI::IsMember({"naive", "stable", "both"}));

  std::string x = "0.999999";
  int digits = 6;
  auto* arcsin = app.add_subcommand("arcsin", "asin of a value known to a number of digits");
  arcsin->add_option("--x", x, "Argument (decimal)");
  arcsin->add_option("--digits", digits, "Exact decimal digits of the argument");

  std::size_t n = 8;
  std::string dist = "uniform", save_path, load_path;
  std::vector<double> orders{1, 2, 4, 8, 16, 32, 0};
  auto* bounds = app.add_subcommand("matmul-bounds", "Compare matmul precision estimators");
  bounds->add_option("--n", n, "Matrix size");
  bounds->add_option("--dist", dist, "uniform, wide or exact")
      ->check(CLI::IsMember({"uniform", "wide", "exact"}));
  bounds->add_option("--p", orders, "Holder orders (0 selects automatically)")->delimiter(',');
  bounds->add_option("--save", save_path, "Write the operands to an XARR1 file");
  bounds->add_option("--load", load_path, "Read the operands from an XARR1 file");

  demo::TrainingOptions training;
  auto* nn = app.add_subcommand("nn-train", "Train a small network and watch its precision");
  nn->add_option("--epochs", training.epochs, "Training epochs");
  nn->add_option("--width", training.width, "Hidden layer width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    std::vector<demo::DemoReport> reports;
    if (*quadratic) {
      if (method != "stable") reports.push_back(demo::cmd_quadratic(a, b, c, demo::QuadraticMethod::naive));
      if (method != "naive") reports.push_back(demo::cmd_quadratic(a, b, c, demo::QuadraticMethod::stable));
    } else if (*arcsin) {
      reports.push_back(demo::cmd_arcsin(x, digits));
    } else if (*bounds) {
      const std::map<std::string, demo::Distribution> dists{
          {"uniform", demo::Distribution::uniform}, {"wide", demo::Distribution::wide}, {"exact", demo::Distribution::exact}};
      const demo::MatmulInputs inputs =
          load_path.empty() ? demo::random_matmul_inputs(n, dists.at(dist), seed) : load_pair(load_path);
      if (!save_path.empty()) save_pair(inputs, save_path);
      reports.push_back(demo::cmd_matmul_bounds(inputs, orders));
    } else if (*nn) {
      training.seed = seed;
      reports.push_back(demo::cmd_nn_train(training));
    }
    if (json) std::cout << demo::to_json(reports);
    else
      for (const auto& r : reports) std::cout << demo::to_table(r);
    return 0;
  } catch (const demo::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const preciseum::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return load_path.empty() ? kExitInternal : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
