#pragma once

// Deterministic chunked parallelism. Work is split into fixed chunks by
// index; each chunk writes its partial result into a slot keyed by chunk
// number and the final reduction runs in chunk order, so the result is
// independent of thread count and scheduling.

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace hapss::par {

/// Thread count: explicit request, else HAPSS_THREADS, else hardware.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HAPSS_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Apply fn(chunk_index, begin, end) for the chunked range [0, n) and return
/// the per-chunk results in chunk order.
template <class T, class Fn>
std::vector<T> map_chunks(std::uint64_t n, std::uint64_t chunk_size, int threads, Fn fn) {
    const std::uint64_t n_chunks = chunk_size ? (n + chunk_size - 1) / chunk_size : 0;
    std::vector<T> results(n_chunks);
    if (n_chunks == 0) return results;

    threads = resolve_threads(threads);
    if (threads <= 1 || n_chunks == 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c) {
            const std::uint64_t b = c * chunk_size;
            results[c] = fn(c, b, std::min(n, b + chunk_size));
        }
        return results;
    }

    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            const std::uint64_t b = c * chunk_size;
            results[c] = fn(c, b, std::min(n, b + chunk_size));
        }
    };
    std::vector<std::thread> pool;
    const int nt = static_cast<int>(std::min<std::uint64_t>(threads, n_chunks));
    pool.reserve(nt);
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return results;
}

}  // namespace hapss::par
