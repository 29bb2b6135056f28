#include "preciseum/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace preciseum {

std::vector<Spread> perturb_run(const Program& prog, std::span<const XScalar> inputs,
                                std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw RangeError("perturb_run needs at least 2 samples");
  if (inputs.size() != prog.input_count()) {
    throw ShapeError("program expects " + std::to_string(prog.input_count()) + " inputs, got " +
                     std::to_string(inputs.size()));
  }
  const FloatFormat format = inputs.empty() ? FloatFormat::binary64 : inputs.front().format();
  std::vector<double> centre(inputs.size());
  std::vector<double> radius(inputs.size());
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    centre[k] = inputs[k].value();
    radius[k] = std::isfinite(centre[k]) ? operand_delta(inputs[k]) : 0.0;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  std::vector<Spread> spread(prog.output_count());
  std::vector<double> point(inputs.size());
  std::vector<char> seen(spread.size(), 0);
  auto observe = [&](std::size_t o, double v) {
    Spread& sp = spread[o];
    if (!std::isfinite(v)) {
      sp.width = std::numeric_limits<double>::infinity();
      return;
    }
    if (!seen[o]) {
      seen[o] = 1;
      sp.min = sp.max = v;
    } else {
      sp.min = std::min(sp.min, v);
      sp.max = std::max(sp.max, v);
    }
    if (!std::isinf(sp.width)) sp.width = sp.max - sp.min;
  };
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      double t = 0.0;
      if (s == 0) {
        t = -1.0;
      } else if (s == 1) {
        t = 1.0;
      } else if (s == 2) {
        t = 0.0;
      } else if (s % 2 == 1) {
        t = unit(rng);
      } else {
        t = coin(rng) ? 1.0 : -1.0;
      }
      point[k] = radius[k] == 0.0 ? centre[k] : centre[k] + t * radius[k];
    }
    const std::vector<double> out = prog.run_plain(point, format);
    for (std::size_t o = 0; o < out.size(); ++o) observe(o, out[o]);
  }

  // Corners aligned with each output's sensitivities, probed one input at a
  // time: random corners of a box with many inputs rarely line all signs up.
  const std::vector<double> mid = prog.run_plain(centre, format);
  for (std::size_t o = 0; o < mid.size(); ++o) observe(o, mid[o]);
  std::vector<std::vector<double>> probe(inputs.size());
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (radius[k] == 0.0) continue;
    point = centre;
    point[k] += radius[k];
    probe[k] = prog.run_plain(point, format);
    for (std::size_t o = 0; o < probe[k].size(); ++o) observe(o, probe[k][o]);
  }
  for (std::size_t o = 0; o < mid.size(); ++o) {
    for (double side : {1.0, -1.0}) {
      for (std::size_t k = 0; k < inputs.size(); ++k) {
        const bool rising = !probe[k].empty() && probe[k][o] >= mid[o];
        point[k] = centre[k] + (rising ? side : -side) * radius[k];
      }
      const std::vector<double> out = prog.run_plain(point, format);
      for (std::size_t p = 0; p < out.size(); ++p) observe(p, out[p]);
    }
  }
  return spread;
}

BlackBitReport check_black_bits(const Program& prog, std::span<const XScalar> inputs,
                                std::span<const XScalar> estimate, const BlackBitOptions& options) {
  if (estimate.size() != prog.output_count()) {
    throw ShapeError("estimate has " + std::to_string(estimate.size()) + " elements, program has " +
                     std::to_string(prog.output_count()) + " outputs");
  }
  const std::vector<Spread> spread = perturb_run(prog, inputs, options.samples, options.seed);
  BlackBitReport report;
  report.elements.reserve(estimate.size());
  for (std::size_t k = 0; k < estimate.size(); ++k) {
    const XScalar& e = estimate[k];
    ElementCheck c;
    c.index = k;
    c.value = e.value();
    c.bits = e.exact_bits();
    c.observed_half_width = spread[k].half_width();
    c.estimated_delta = e.is_finite() ? implied_delta(e) : std::numeric_limits<double>::infinity();
    if (!e.is_finite() || !(c.observed_half_width > 0.0) || std::isinf(c.observed_half_width)) {
      c.informational = true;
      ++report.informational;
    } else {
      ++report.checked;
      const double ulp = 2.0 * half_ulp(e.value(), e.format());
      c.ok = c.estimated_delta <= options.slack * c.observed_half_width + ulp;
      report.worst_ratio = std::max(report.worst_ratio, c.estimated_delta / c.observed_half_width);
      if (!c.ok) {
        ++report.violations;
        report.pass = false;
      }
    }
    report.elements.push_back(c);
  }
  return report;
}

}  // namespace preciseum
