#include "blockspec/rng.hpp"

#include <limits>

namespace blockspec {

namespace {

// SplitMix64 finalizer; only used to spread (stream, tag) into a new stream id.
std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Engine make_engine(const Seed& seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed.value),
                    static_cast<std::uint32_t>(seed.value >> 32),
                    static_cast<std::uint32_t>(seed.stream),
                    static_cast<std::uint32_t>(seed.stream >> 32)};
  return Engine(seq);
}

Seed derive(const Seed& parent, std::uint64_t tag) noexcept {
  return Seed{parent.value, mix64(parent.stream ^ mix64(tag))};
}

std::uint64_t uniform_index(Engine& engine, std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = engine();
  while (draw >= limit) draw = engine();
  return draw % bound;
}

}  // namespace blockspec
