#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "gibbs_spectra/errors.hpp"

namespace gibbs_spectra {

// Seeded generator with explicit variate transforms.  The standard library's
// distribution objects are implementation-defined, so uniform, normal
// (Marsaglia polar) and gamma (Marsaglia-Tsang) draws are produced here from
// raw mt19937_64 output.  Given a seed, every draw sequence is identical
// across platforms.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal, Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  // Gamma(shape, 1), Marsaglia-Tsang squeeze; shapes below 1 use the
  // boost Gamma(shape) = Gamma(shape + 1) * U^{1/shape}.
  double gamma(double shape) {
    if (!(shape > 0.0)) fail(ErrorCode::BadConcentration, "gamma shape must be positive");
    if (shape < 1.0) {
      const double u = uniform01();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform01();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Dirichlet draw by gamma normalization.
  std::vector<double> dirichlet(const std::vector<double>& alpha) {
    std::vector<double> draw(alpha.size());
    double total = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      draw[i] = gamma(alpha[i]);
      total += draw[i];
    }
    for (double& g : draw) g /= total;
    return draw;
  }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gibbs_spectra
