#ifndef MLAB_STATS_HPP
#define MLAB_STATS_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace mlab {

struct MeanStdErr {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

/// Sample mean with the jackknife (leave-one-out) standard error.
MeanStdErr mean_with_jackknife_se(const std::vector<double>& samples);

/// log(exp(a) + exp(b)) without overflow.
double log_sum_exp(double a, double b);

/// Run body(i) for i in [0, n) across up to `workers` threads. Each index is
/// executed exactly once; callers write results into preallocated per-index
/// slots so the outcome is identical for any worker count.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

}  // namespace mlab

#endif
