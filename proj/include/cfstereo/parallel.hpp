#pragma once

#include <cstddef>
#include <functional>

namespace cfstereo {

/// Worker count used by parallel_for. Initialized from the CFSTEREO_THREADS
/// environment variable (0 or unset means hardware concurrency).
std::size_t thread_count();

/// Overrides the worker count; 0 restores the automatic choice.
void set_thread_count(std::size_t n);

/// Runs body(i) for i in [0, n). Items are split into contiguous chunks, one
/// per worker. Bodies must only write state owned by their own index, which
/// keeps results independent of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cfstereo
