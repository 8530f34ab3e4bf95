#pragma once

#include <cstdint>
#include <string_view>

namespace topiclass {

// Stable per-stage seed derivation: one master seed fans out to independent
// stage seeds keyed by stage name, so stages can be re-run in isolation.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stage) {
  // FNV-1a over the stage name.
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : stage) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  // splitmix64 finalizer over the combination.
  std::uint64_t z = master ^ h;
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace topiclass
