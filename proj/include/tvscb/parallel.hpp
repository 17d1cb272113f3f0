#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <random>
#include <string_view>
#include <thread>
#include <vector>

namespace tvscb {

/// Worker count: $TVSCB_THREADS if set, else hardware concurrency.
int default_thread_count();

/// Seed for the `index`-th draw of the named sub-stream of `master`.
/// Streams are keyed by name so that adding a consumer never shifts the
/// draws of another.
std::uint64_t stream_seed(std::uint64_t master, std::string_view stream, std::uint64_t index = 0);

inline std::mt19937_64 make_engine(std::uint64_t master, std::string_view stream,
                                   std::uint64_t index = 0) {
    return std::mt19937_64(stream_seed(master, stream, index));
}

/// Calls f(i) for i in [0, n) on up to `threads` workers. Results must be
/// written by index; the scheduling order never affects them. If any call
/// throws, the exception from the smallest index is rethrown.
template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    f(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace tvscb
