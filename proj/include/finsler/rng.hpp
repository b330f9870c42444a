#pragma once

// Deterministic, counter-addressable random streams. Every sampled quantity
// in the project is a pure function of (seed, stream, counter), which is what
// makes reductions reproducible independent of thread count.

#include <cstdint>

#include "finsler/smallvec.hpp"

namespace finsler {

struct SplitMix64 {
  uint64_t state = 0x9e3779b97f4a7c15ULL;

  explicit SplitMix64(uint64_t seed = 0x9e3779b97f4a7c15ULL) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  // Marsaglia polar method; one spare cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * u01() - 1.0;
      v = 2.0 * u01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  Vec unit_vector(int dim) {
    Vec y(dim);
    double m2;
    do {
      for (int i = 0; i < dim; ++i) y.c[i] = normal();
      m2 = norm2(y);
    } while (m2 < 1e-12);
    return y * (1.0 / std::sqrt(m2));
  }

  // components uniform in [-1,1]
  Vec box_vector(int dim) {
    Vec y(dim);
    for (int i = 0; i < dim; ++i) y.c[i] = uniform(-1.0, 1.0);
    return y;
  }

 private:
  double spare_ = 0;
  bool have_spare_ = false;
};

// Independent stream addressed by (seed, stream id). Two different stream
// ids give statistically independent generators for the same seed.
inline SplitMix64 stream_rng(uint64_t seed, uint64_t stream) {
  SplitMix64 mix(seed ^ 0x5851f42d4c957f2dULL);
  mix.state += stream * 0x2545f4914f6cdd1dULL;
  mix.next();
  mix.next();
  return SplitMix64(mix.next());
}

// Radical-inverse (Halton) sequence for low-discrepancy domain sampling.
inline double halton(uint64_t index, uint32_t base) {
  double f = 1.0, r = 0.0;
  uint64_t i = index + 1;  // skip the all-zeros element
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

// dim <= 3 point of the Halton sequence in [0,1)^dim, with a seed-derived
// Cranley-Patterson rotation so different seeds decorrelate.
inline Vec halton_point(uint64_t index, int dim, uint64_t seed) {
  static constexpr uint32_t kBases[kMaxDim] = {2, 3, 5};
  SplitMix64 rot(seed ^ 0xd6e8feb86659fd93ULL);
  Vec p(dim);
  for (int i = 0; i < dim; ++i) {
    double shift = rot.u01();
    double v = halton(index, kBases[i]) + shift;
    p.c[i] = v - std::floor(v);
  }
  return p;
}

// Quasi-uniform directions: golden-angle spiral on S^2, uniform angles on S^1.
inline Vec quasi_uniform_direction(int i, int count, int dim) {
  if (dim == 2) {
    double th = 2.0 * M_PI * (i + 0.5) / count;
    return Vec{std::cos(th), std::sin(th)};
  }
  double golden = M_PI * (3.0 - std::sqrt(5.0));
  double z = 1.0 - 2.0 * (i + 0.5) / count;
  double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  double th = golden * i;
  return Vec{r * std::cos(th), r * std::sin(th), z};
}

inline uint64_t fnv1a64(const void* data, size_t size,
                        uint64_t h = 1469598103934665603ULL) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace finsler
