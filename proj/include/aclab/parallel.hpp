#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace aclab {

// Worker count: an explicit override if set, else LAB_WORKERS, else the
// hardware concurrency (at least 1).
unsigned default_workers();

// 0 clears the override.
void set_default_workers(unsigned workers);

// Resolves a caller-supplied count; 0 means default_workers().
inline unsigned resolve_workers(unsigned workers) { return workers == 0 ? default_workers() : workers; }

// Calls fn(trial) for every trial in [0, trials), sharded into contiguous
// blocks over `workers` threads. fn must only write state owned by its trial;
// callers merge per-trial results in index order afterwards, which makes the
// outcome independent of the worker count.
template <class Fn>
void for_each_trial(std::uint64_t trials, unsigned workers, Fn&& fn)
{
    if (trials == 0) return;
    workers = std::max(1u, workers);
    if (workers == 1 || trials == 1) {
        for (std::uint64_t t = 0; t < trials; ++t) fn(t);
        return;
    }
    const std::uint64_t shards = std::min<std::uint64_t>(workers, trials);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(shards);
    for (std::uint64_t s = 0; s < shards; ++s) {
        const std::uint64_t begin = trials * s / shards;
        const std::uint64_t end = trials * (s + 1) / shards;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::uint64_t t = begin; t < end; ++t) fn(t);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace aclab
