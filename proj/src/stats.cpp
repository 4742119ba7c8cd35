#include "mlab/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace mlab {

MeanStdErr mean_with_jackknife_se(const std::vector<double>& samples) {
    if (samples.empty()) throw std::invalid_argument("mean_with_jackknife_se: no samples");
    const std::size_t n = samples.size();
    double sum = 0.0;
    for (double x : samples) sum += x;
    const double mean = sum / static_cast<double>(n);
    if (n == 1) return {mean, 0.0, 1};
    // Leave-one-out means: mean_{-i} - mean = (mean - x_i) / (n - 1).
    double ss = 0.0;
    for (double x : samples) {
        double delta = (mean - x) / static_cast<double>(n - 1);
        ss += delta * delta;
    }
    double se = std::sqrt(ss * static_cast<double>(n - 1) / static_cast<double>(n));
    return {mean, se, n};
}

double log_sum_exp(double a, double b) {
    if (std::isinf(a) && a < 0.0) return b;
    if (std::isinf(b) && b < 0.0) return a;
    double hi = std::max(a, b);
    double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
    if (n == 0) return;
    const std::size_t nw = std::min<std::size_t>(std::max(workers, 1), n);
    if (nw == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w)
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                body(i);
            }
        });
    for (auto& t : pool) t.join();
}

}  // namespace mlab
