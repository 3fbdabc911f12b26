#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace insider {

/// Monte Carlo summary: sample count, mean and standard error of the mean.
struct McEstimate {
    std::size_t n = 0;
    double mean = 0.0;
    double std_error = 0.0;
};

/// Welford running moments; `merge` is Chan's pairwise update.
class McAccumulator {
public:
    void add(double x) noexcept {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }

    void merge(const McAccumulator& other) noexcept {
        if (other.n_ == 0) return;
        if (n_ == 0) {
            *this = other;
            return;
        }
        const double na = static_cast<double>(n_);
        const double nb = static_cast<double>(other.n_);
        const double delta = other.mean_ - mean_;
        const double total = na + nb;
        mean_ += delta * nb / total;
        m2_ += other.m2_ + delta * delta * na * nb / total;
        n_ += other.n_;
    }

    [[nodiscard]] std::size_t count() const noexcept { return n_; }
    [[nodiscard]] double mean() const noexcept { return mean_; }
    [[nodiscard]] double variance() const noexcept {
        return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
    }

    [[nodiscard]] McEstimate estimate() const noexcept {
        return {n_, mean_, n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0};
    }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Paths per work unit. Chunk boundaries depend only on the item count, so
/// results reduced in chunk order are identical for any worker count.
inline constexpr std::size_t kChunkSize = 1024;

/// Evaluates `fn(begin, end)` over fixed-size chunks of [0, items) on up to
/// `workers` threads and returns the per-chunk results in chunk order.
/// `workers == 0` means one thread per hardware core.
template <class Fn>
auto map_chunks(std::size_t items, unsigned workers, Fn&& fn, std::size_t chunk = kChunkSize)
    -> std::vector<decltype(fn(std::size_t{}, std::size_t{}))> {
    using Result = decltype(fn(std::size_t{}, std::size_t{}));
    const std::size_t chunks = (items + chunk - 1) / chunk;
    std::vector<Result> results(chunks);
    if (chunks == 0) return results;

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    const auto threads = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));

    auto run_chunk = [&](std::size_t c) {
        const std::size_t begin = c * chunk;
        results[c] = fn(begin, std::min(items, begin + chunk));
    };

    if (threads <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
                    try {
                        run_chunk(c);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

/// Monte Carlo mean of `sample(i)` for i in [0, paths), reduced in chunk order.
template <class Sample>
McEstimate mc_mean(std::size_t paths, unsigned workers, Sample&& sample) {
    const auto partials = map_chunks(paths, workers, [&](std::size_t begin, std::size_t end) {
        McAccumulator acc;
        for (std::size_t i = begin; i < end; ++i) acc.add(sample(i));
        return acc;
    });
    McAccumulator total;
    for (const auto& p : partials) total.merge(p);
    return total.estimate();
}

}  // namespace insider
