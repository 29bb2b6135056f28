#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "preciseum/xarray.hpp"

namespace preciseum::demo {

/// Bad user input: reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One labelled row. Text cells hold renderings and verdicts, number cells
/// hold bit counts, gaps and timings.
struct ReportRow {
  std::string label;
  std::vector<std::pair<std::string, std::string>> text;
  std::vector<std::pair<std::string, double>> numbers;

  const std::string& text_at(const std::string& key) const;
  double number_at(const std::string& key) const;
};

struct DemoReport {
  std::string demo;
  std::vector<ReportRow> rows;

  const ReportRow& row(const std::string& label) const;
};

/// Aligned plain-text table with one line per row.
std::string to_table(const DemoReport& report);
/// JSON document; see docs/cli-json.md.
std::string to_json(const DemoReport& report);
/// JSON array of reports, as the command line prints them.
std::string to_json(const std::vector<DemoReport>& reports);

enum class QuadraticMethod { naive, stable };

/// Roots of a x^2 + b x + c = 0 with tracked precision. Rows "x1" and "x2"
/// carry fixed(15) and scientific(16) renderings, exact bits, unmasked
/// digits and the black-bit oracle verdict.
DemoReport cmd_quadratic(const std::string& a, const std::string& b, const std::string& c,
                         QuadraticMethod method);

/// asin of x known to `digits` decimal digits.
DemoReport cmd_arcsin(const std::string& x, int digits);

enum class Distribution { uniform, wide, exact };

struct MatmulInputs {
  XArray a;
  XArray b;
};

/// Seeded random n x n operands: `uniform` draws values in [-1, 1] with
/// 8..40 exact bits, `wide` also spreads binary exponents over [-30, 30],
/// `exact` gives full bits.
MatmulInputs random_matmul_inputs(std::size_t n, Distribution dist, std::uint64_t seed);

/// Mean tightness gap of each estimator against the exact mixed tropical
/// bound, with wall times. `orders` lists the Holder orders to try;
/// 0 stands for automatic selection.
DemoReport cmd_matmul_bounds(const MatmulInputs& inputs, const std::vector<double>& orders);

struct TrainingOptions {
  int epochs = 200;
  int width = 8;
  std::uint64_t seed = 42;
};

/// Trains input(2) -> linear(width) -> tanh -> linear(1) on a fixed
/// synthetic regression task with SGD. One row per epoch plus a final
/// "oracle" row for the black-bit check of the last forward pass.
DemoReport cmd_nn_train(const TrainingOptions& options);

}  // namespace preciseum::demo
