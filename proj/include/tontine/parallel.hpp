#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tontine {

/// Hardware concurrency, capped by the TONTINE_THREADS environment
/// variable when it holds a positive integer.
unsigned default_worker_count();

/// Runs `task(chunk)` for every chunk in [0, chunks) on up to `workers`
/// threads. Callers store per-chunk results and reduce them in chunk order,
/// which keeps results independent of the worker count.
template <typename Task>
void for_each_chunk(std::size_t chunks, unsigned workers, Task&& task) {
    if (workers == 0) {
        workers = default_worker_count();
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1U, workers), std::max<std::size_t>(chunks, 1)));
    if (workers == 1) {
        for (std::size_t c = 0; c < chunks; ++c) {
            task(c);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            for (std::size_t c = next++; c < chunks; c = next++) {
                task(c);
            }
        } catch (...) {
            const std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next = chunks;
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) {
        threads.emplace_back(worker);
    }
    worker();
    for (auto& t : threads) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace tontine
