#pragma once

#include <cstdint>

namespace primediff {

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime_u64(std::uint64_t n);

}  // namespace primediff
