#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "preciseum/program.hpp"

namespace preciseum {

/// Observed range of one output over all perturbed replays.
struct Spread {
  double min = 0.0;
  double max = 0.0;
  /// max - min; +inf when some replay produced NaN or an infinity.
  double width = 0.0;
  double half_width() const noexcept { return width / 2; }
};

/// Replays prog in plain arithmetic on inputs drawn from [v - delta, v + delta]
/// of every input: sample 0 takes all lower endpoints, sample 1 all upper
/// endpoints, sample 2 the centres; the remaining samples alternate between
/// uniform draws and random corners of the input box. On top of the samples,
/// every input is probed alone at its upper endpoint and, per output, the two
/// corners matching the probed signs are replayed. Only data-induced
/// variation is observed; rounding that every replay shares is not. Needs
/// samples >= 2 (RangeError). Equal seeds give identical results.
std::vector<Spread> perturb_run(const Program& prog, std::span<const XScalar> inputs,
                                std::size_t samples, std::uint64_t seed);

struct BlackBitOptions {
  /// Allowed ratio between the estimated inaccuracy and the observed half width.
  double slack = 4.0;
  std::size_t samples = 64;
  std::uint64_t seed = 0;
};

struct ElementCheck {
  std::size_t index = 0;
  double value = 0.0;
  int bits = 0;
  double estimated_delta = 0.0;
  double observed_half_width = 0.0;
  /// False only for violations; elements with zero width are informational.
  bool ok = true;
  bool informational = false;
};

struct BlackBitReport {
  bool pass = true;
  std::size_t checked = 0;
  std::size_t informational = 0;
  std::size_t violations = 0;
  /// Largest estimated_delta / observed_half_width over checked elements.
  double worst_ratio = 0.0;
  std::vector<ElementCheck> elements;
};

/// Checks that bits marked inexact genuinely vary: for every output with a
/// positive observed half width hw, the implied inaccuracy of the estimate
/// must satisfy delta <= slack * hw + ulp. Throws ShapeError when the
/// estimate and the program outputs differ in count.
BlackBitReport check_black_bits(const Program& prog, std::span<const XScalar> inputs,
                                std::span<const XScalar> estimate, const BlackBitOptions& options = {});

}  // namespace preciseum
