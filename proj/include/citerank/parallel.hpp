#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace citerank {

/// Fixed work-block size. Block boundaries never depend on the thread count.
inline constexpr std::size_t kBlockSize = 1 << 14;

inline std::size_t block_count(std::size_t n) { return (n + kBlockSize - 1) / kBlockSize; }

/**
 * Calls fn(block, begin, end) for every block of [0, n). Blocks are claimed
 * dynamically by up to `threads` workers; callers write only block-owned state,
 * so results do not depend on scheduling.
 */
template <typename Fn> void for_each_block(std::size_t n, unsigned threads, Fn &&fn) {
    const std::size_t blocks = block_count(n);
    auto run = [&](std::size_t b) { fn(b, b * kBlockSize, std::min(n, (b + 1) * kBlockSize)); };
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), blocks));
    if (workers <= 1) {
        for (std::size_t b = 0; b < blocks; ++b)
            run(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t b; (b = next.fetch_add(1)) < blocks;)
                run(b);
        });
}

/// Calls fn(i) for i in [0, n) on up to `threads` workers, one index at a time.
template <typename Fn> void parallel_for(std::size_t n, unsigned threads, Fn &&fn) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;)
                fn(i);
        });
}

} // namespace citerank
