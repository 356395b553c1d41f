// parallel.hpp
// Minimal fan-out over an index range. Workers pull indices from a shared
// counter; callers write results into pre-sized slots so the output order
// never depends on scheduling.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace metrosim {

// Thread budget from METROSIM_THREADS (positive integer), else the hardware
// concurrency.
unsigned thread_budget();

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    const auto workers = static_cast<std::size_t>(
        std::clamp<std::size_t>(threads == 0 ? 1 : threads, 1, std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace metrosim
