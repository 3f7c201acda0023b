#pragma once

// A small work-sharing loop: chunks are claimed from an atomic counter and
// results are stored by chunk index, so the merged output does not depend
// on the number of workers.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hmfac {

/// Worker count from TOOL_WORKERS, else 1.
inline unsigned workers_from_env()
{
    if (const char* s = std::getenv("TOOL_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(s, &end, 10);
        if (end != s && *end == '\0' && v >= 1)
            return static_cast<unsigned>(v);
    }
    return 1;
}

/// Runs fn(chunk_index) for every chunk in [0, chunks) on `workers` threads
/// and returns the results in chunk order. The first exception thrown by any
/// chunk is rethrown after all threads have joined.
template <class Fn>
auto parallel_chunks(std::size_t chunks, unsigned workers, Fn&& fn)
{
    using Result = decltype(fn(std::size_t{}));
    std::vector<Result> out(chunks);
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(chunks, 1))));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto body = [&] {
        while (true) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks)
                return;
            try {
                out[c] = fn(c);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next.store(chunks);
            }
        }
    };
    if (workers == 1) {
        body();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(body);
    }
    if (error)
        std::rethrow_exception(error);
    return out;
}

} // namespace hmfac
