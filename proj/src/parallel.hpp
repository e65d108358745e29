#ifndef NCVIS_SRC_PARALLEL_HPP
#define NCVIS_SRC_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ncvis::detail {

// Runs fn(begin, end) over [0, n) in chunks pulled by n_threads workers.
// Suitable only when each index's result is independent of scheduling.
template <typename Fn>
void parallel_chunks(std::size_t n, std::size_t n_threads, Fn&& fn, std::size_t chunk = 256) {
    n_threads = std::max<std::size_t>(1, std::min(n_threads, (n + chunk - 1) / chunk));
    if (n_threads == 1) {
        fn(std::size_t{0}, n);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_lock;
    auto worker = [&] {
        try {
            for (;;) {
                const std::size_t begin = next.fetch_add(chunk);
                if (begin >= n) {
                    return;
                }
                fn(begin, std::min(n, begin + chunk));
            }
        } catch (...) {
            std::lock_guard lock(error_lock);
            if (!error) {
                error = std::current_exception();
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(n_threads - 1);
    for (std::size_t t = 1; t < n_threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    pool.clear();
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace ncvis::detail

#endif
