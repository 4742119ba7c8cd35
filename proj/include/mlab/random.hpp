#ifndef MLAB_RANDOM_HPP
#define MLAB_RANDOM_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace mlab {

/// Address of an independent random stream. Identical (seed, stream_id)
/// pairs reproduce identical draws bit-for-bit; distinct stream_ids give
/// statistically independent streams, which is what makes trajectory-level
/// Monte Carlo embarrassingly parallel yet reproducible.
struct RandomStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

/// Derive a child stream address by mixing extra words into the stream id.
RandomStream substream(RandomStream base, std::uint64_t a, std::uint64_t b = 0);

/// Deterministic random engine with the distribution helpers used across the
/// project. Distributions are implemented in-house (Box-Muller, inverse-CDF
/// style discrete sampling) so that draws are identical across standard
/// library implementations.
class Rng {
  public:
    explicit Rng(RandomStream stream);

    std::uint64_t next_u64();

    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform();

    bool bernoulli(double p);

    /// Standard normal via Box-Muller (one spare value cached).
    double gaussian();

    std::complex<double> gaussian_complex();

    /// Sample an index with probability weights[i] / sum(weights).
    /// Weights must be non-negative with a positive sum.
    std::size_t discrete(const std::vector<double>& weights);

    /// Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n);

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace mlab

#endif
