#pragma once

// Block-partitioned Monte Carlo fills. Draw b lives in block b / kMcBlockSize,
// and each block has its own generator derived from (seed, stream, block), so
// the filled buffer is identical for any worker count.

#include "repdoe/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace repdoe {

inline constexpr std::size_t kMcBlockSize = 8192;

inline RngState block_state(RngState base, std::size_t block) {
    return RngState{base.seed, mix64(base.stream ^ mix64(0x5851f42d4c957f2dULL + block))};
}

// 0 means "one per hardware thread".
inline unsigned resolve_workers(unsigned workers) {
    if (workers != 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Fills `out` (size draws * per_draw) by calling drawer(rng, dst) once per draw;
// `make_drawer()` is invoked once per worker so drawers may own scratch space.
template <class MakeDrawer>
void fill_blocked(std::vector<double>& out, std::size_t draws, std::size_t per_draw, RngState base,
                  unsigned workers, MakeDrawer make_drawer) {
    out.resize(draws * per_draw);
    const std::size_t blocks = (draws + kMcBlockSize - 1) / kMcBlockSize;
    const auto run_block = [&](auto& drawer, std::size_t b) {
        Rng rng(block_state(base, b));
        const std::size_t end = std::min(draws, (b + 1) * kMcBlockSize);
        for (std::size_t d = b * kMcBlockSize; d < end; ++d) drawer(rng, out.data() + d * per_draw);
    };
    workers = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(std::max<std::size_t>(blocks, 1)));
    if (workers <= 1) {
        auto drawer = make_drawer();
        for (std::size_t b = 0; b < blocks; ++b) run_block(drawer, b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                auto drawer = make_drawer();
                for (std::size_t b = next++; b < blocks; b = next++) run_block(drawer, b);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace repdoe
