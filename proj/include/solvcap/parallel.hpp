#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace solvcap {

// Independent generator for block `stream` of a run seeded with `seed`.
// Streams are addressed by counter, so results never depend on which thread
// draws which block.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream);

// Runs body(i) for i in [0, count) on up to `threads` workers (0 = 1).
// Exceptions from workers are rethrown on the caller's thread.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace solvcap
