#pragma once

// Compensated accumulation and a deterministic block-parallel runner.
//
// Ensemble estimators must produce bit-identical output for any thread
// count. Paths are grouped into fixed-size blocks; each block is reduced
// in path order into its own accumulator, blocks are handed to threads
// through an atomic cursor, and the block accumulators are folded in
// block order afterwards. No floating-point result ever depends on which
// thread did the work.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace orwalk {

class KahanSum {
public:
    void add(double x) noexcept {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const noexcept { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline constexpr int kEnsembleBlockSize = 64;  // fixed: part of the output contract

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Runs `work(index, block_accumulator)` for index in [0, count), with
// per-block accumulators created by `make_block()`. Returns accumulators
// in block order. Exceptions from workers are rethrown on the caller.
template <class Accum, class MakeBlock, class Work>
std::vector<Accum> run_blocks(std::int64_t count, int threads, MakeBlock make_block, Work work) {
    const std::int64_t n_blocks = (count + kEnsembleBlockSize - 1) / kEnsembleBlockSize;
    std::vector<Accum> accums;
    accums.reserve(static_cast<std::size_t>(n_blocks));
    for (std::int64_t b = 0; b < n_blocks; ++b) accums.push_back(make_block());

    std::atomic<std::int64_t> cursor{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};

    auto body = [&] {
        for (;;) {
            const std::int64_t b = cursor.fetch_add(1);
            if (b >= n_blocks || failed.load()) return;
            const std::int64_t lo = b * kEnsembleBlockSize;
            const std::int64_t hi = std::min(count, lo + kEnsembleBlockSize);
            try {
                for (std::int64_t i = lo; i < hi; ++i) work(i, accums[static_cast<std::size_t>(b)]);
            } catch (...) {
                if (!failed.exchange(true)) first_error = std::current_exception();
                return;
            }
        }
    };

    const int n_threads = std::min<std::int64_t>(resolve_threads(threads), std::max<std::int64_t>(n_blocks, 1));
    if (n_threads <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(body);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) std::rethrow_exception(first_error);
    return accums;
}

// Mean / standard-error pair computed from ordered sums.
struct MeanStderr {
    double mean = 0.0;
    double std_err = 0.0;
};

inline MeanStderr mean_stderr(double sum, double sum_sq, std::int64_t n) {
    MeanStderr out;
    if (n <= 0) return out;
    out.mean = sum / static_cast<double>(n);
    if (n >= 2) {
        const double var = (sum_sq - sum * out.mean) / static_cast<double>(n - 1);
        out.std_err = var > 0.0 ? std::sqrt(var / static_cast<double>(n)) : 0.0;
    }
    return out;
}

}  // namespace orwalk
