#pragma once

#include <cstddef>
#include <functional>

namespace mdq::parallel {

/// Sets the worker count used by parallel_for. 0 restores the hardware
/// default. Affects subsequent calls only.
void set_thread_count(unsigned n);

unsigned thread_count();

/// Runs fn(begin, end) over disjoint contiguous chunks of [0, n).
///
/// Every index is processed exactly once and each output element must be
/// written by the chunk that owns it; under that contract results are
/// bit-identical for any thread count. Exceptions from workers are
/// rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace mdq::parallel
