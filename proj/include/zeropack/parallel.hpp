#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace zeropack
{

// Work is split into a fixed number of blocks that does not depend on the
// thread count, and partial results are combined in block order. Results are
// therefore bitwise identical for any number of threads.

/// Runs fn(block) for block in [0, n_blocks) on up to `threads` threads.
template <typename Fn>
void parallel_for_blocks(std::size_t n_blocks, unsigned threads, Fn &&fn)
{
    threads = std::max(1u, threads);
    if (threads == 1 || n_blocks <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) {
            fn(b);
        }
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, n_blocks);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t b = w; b < n_blocks; b += workers) {
                        fn(b);
                    }
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

/// Pairwise (tree) summation; the tree shape depends only on the length.
inline double pairwise_sum(std::span<const double> values)
{
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) {
            s += v;
        }
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

} // namespace zeropack
