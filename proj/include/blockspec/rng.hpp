#pragma once

#include <cstdint>
#include <random>

namespace blockspec {

// A (value, stream) pair names one independent random stream. Streams are
// realized as std::mt19937_64 seeded through std::seed_seq; both algorithms
// are fixed by the C++ standard, so a Seed reproduces bit-identically on every
// conforming platform. std::*_distribution is deliberately not used since its
// output is implementation-defined.
struct Seed {
  std::uint64_t value = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const Seed&, const Seed&) = default;
};

using Engine = std::mt19937_64;

Engine make_engine(const Seed& seed);

// Child stream keyed by `tag`. Distinct (parent, tag) pairs give distinct
// streams; the parent value is kept so provenance stays readable.
Seed derive(const Seed& parent, std::uint64_t tag) noexcept;

// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Engine& engine, double p) { return uniform01(engine) < p; }

// Uniform integer in [0, bound) by rejection; bound must be positive.
std::uint64_t uniform_index(Engine& engine, std::uint64_t bound);

// Index drawn with probability proportional to weights[i]; weights are
// nonnegative with a positive sum.
template <typename Weights>
std::size_t weighted_index(Engine& engine, const Weights& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double target = uniform01(engine) * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  std::size_t i = 0;
  for (double w : weights) {
    if (w > 0.0) last_positive = i;
    acc += w;
    if (target < acc) return i;
    ++i;
  }
  return last_positive;
}

}  // namespace blockspec
