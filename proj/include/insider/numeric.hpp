#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace insider {

/// Neumaier (improved Kahan-Babuska) compensated accumulator.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }

    [[nodiscard]] double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// Composite Simpson rule over equally spaced samples f(x_0), ..., f(x_k)
/// with spacing h. An odd interval count closes with the 3/8 rule on the
/// last three intervals; a single interval falls back to the trapezoid.
inline double simpson_on_nodes(std::span<const double> f, double h) {
    if (f.empty()) {
        throw std::invalid_argument("simpson_on_nodes: no samples");
    }
    const std::size_t k = f.size() - 1;
    if (k == 0) return 0.0;
    if (k == 1) return 0.5 * h * (f[0] + f[1]);

    const std::size_t simpson_end = (k % 2 == 0) ? k : k - 3;
    CompensatedSum acc;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
        acc += (h / 3.0) * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    }
    if (simpson_end != k) {
        const std::size_t i = simpson_end;
        acc += (3.0 * h / 8.0) * (f[i] + 3.0 * f[i + 1] + 3.0 * f[i + 2] + f[i + 3]);
    }
    return acc.value();
}

/// Composite Simpson rule for a callable on [a, b] with an even number of
/// intervals.
template <class F>
double simpson(F&& f, double a, double b, std::size_t intervals) {
    if (intervals == 0 || intervals % 2 != 0) {
        throw std::invalid_argument("simpson: interval count must be even and positive");
    }
    const double h = (b - a) / static_cast<double>(intervals);
    CompensatedSum acc;
    acc += f(a);
    acc += f(b);
    for (std::size_t i = 1; i < intervals; ++i) {
        const double x = a + h * static_cast<double>(i);
        acc += (i % 2 == 1 ? 4.0 : 2.0) * f(x);
    }
    return acc.value() * h / 3.0;
}

}  // namespace insider
