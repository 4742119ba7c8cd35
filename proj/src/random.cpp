#include "mlab/random.hpp"

#include <cmath>
#include <stdexcept>

namespace mlab {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

RandomStream substream(RandomStream base, std::uint64_t a, std::uint64_t b) {
    // Mix the extra words through splitmix so that nearby indices land on
    // unrelated stream ids.
    std::uint64_t s = base.stream_id;
    std::uint64_t id = splitmix64(s);
    s ^= a * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull;
    id ^= splitmix64(s);
    s ^= b * 0x9e3779b97f4a7c15ull + 1;
    id ^= splitmix64(s);
    return RandomStream{base.seed, id};
}

Rng::Rng(RandomStream stream) {
    std::uint64_t s = stream.seed ^ 0x6a09e667f3bcc909ull;
    std::uint64_t w0 = splitmix64(s);
    s ^= stream.stream_id;
    std::uint64_t w1 = splitmix64(s);
    std::uint64_t w2 = splitmix64(s);
    std::uint64_t w3 = splitmix64(s);
    std::seed_seq seq{static_cast<std::uint32_t>(w0), static_cast<std::uint32_t>(w0 >> 32),
                      static_cast<std::uint32_t>(w1), static_cast<std::uint32_t>(w1 >> 32),
                      static_cast<std::uint32_t>(w2), static_cast<std::uint32_t>(w2 >> 32),
                      static_cast<std::uint32_t>(w3), static_cast<std::uint32_t>(w3 >> 32)};
    engine_.seed(seq);
}

std::uint64_t Rng::next_u64() { return engine_(); }

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

bool Rng::bernoulli(double p) { return uniform() < p; }

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller; u is kept away from zero so log(u) is finite.
    double u = 0.0;
    do {
        u = uniform();
    } while (u <= 0.0);
    double v = uniform();
    double r = std::sqrt(-2.0 * std::log(u));
    double theta = 2.0 * M_PI * v;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::complex<double> Rng::gaussian_complex() {
    return {gaussian(), gaussian()};
}

std::size_t Rng::discrete(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("discrete: negative weight");
        total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("discrete: weights sum to zero");
    double x = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        acc += weights[i];
        if (x < acc) return i;
    }
    return weights.size() - 1;
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_int: n == 0");
    // Rejection sampling to avoid modulo bias.
    std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

}  // namespace mlab
