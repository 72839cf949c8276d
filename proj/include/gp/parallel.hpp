#pragma once

#include <cstddef>
#include <functional>

namespace gp {

// Worker count: explicit override if set, else $GP_THREADS, else the
// hardware concurrency.
std::size_t worker_count();
void set_worker_count(std::size_t n);  // 0 restores the default

// Runs body(begin, end) over a fixed partition of [0, count) into chunks of
// `chunk` indices. The partition does not depend on the worker count, so any
// per-chunk result merged in chunk order is identical for every thread count.
void parallel_chunks(std::size_t count, std::size_t chunk,
                     const std::function<void(std::size_t chunk_index, std::size_t begin, std::size_t end)>& body);

}  // namespace gp
