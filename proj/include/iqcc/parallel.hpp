#pragma once

#include <cstddef>
#include <functional>

namespace iqcc {

/// Worker count from IQCC_THREADS, else the hardware concurrency (at least 1).
int thread_count();

/// Splits [0, n) into contiguous chunks and calls body(chunk, begin, end) for
/// each, possibly concurrently. Chunk boundaries depend only on n, so callers
/// that merge per-chunk outputs in chunk order get results independent of the
/// thread count.
void for_each_chunk(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

/// Number of chunks for_each_chunk uses for n items.
std::size_t chunk_count(std::size_t n);

}  // namespace iqcc
