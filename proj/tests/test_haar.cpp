#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "mlab/haar.hpp"
#include "mlab/random.hpp"

using namespace mlab;

namespace {

/// Two-sample Kolmogorov-Smirnov statistic.
double two_sample_ks(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double ks = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        double fa = i / static_cast<double>(a.size());
        double fb = j / static_cast<double>(b.size());
        ks = std::max(ks, std::fabs(fa - fb));
    }
    return ks;
}

}  // namespace

TEST_CASE("sampled matrices are unitary to 1e-12") {
    Rng rng(RandomStream{11, 0});
    for (int dim : {1, 2, 3, 4, 8}) {
        Eigen::MatrixXcd u = sample_haar_unitary(dim, rng);
        Eigen::MatrixXcd err =
            u.adjoint() * u - Eigen::MatrixXcd::Identity(dim, dim);
        CHECK(err.cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("dimension one gives a uniform phase") {
    Rng rng(RandomStream{12, 0});
    double sum_re = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        Eigen::MatrixXcd u = sample_haar_unitary(1, rng);
        CHECK(std::fabs(std::abs(u(0, 0)) - 1.0) < 1e-12);
        sum_re += u(0, 0).real();
    }
    // Uniform phase => mean of the real part vanishes.
    CHECK(std::fabs(sum_re / n) < 0.02);
}

TEST_CASE("left invariance: tr(VU) is distributed like tr(U)") {
    Rng rng(RandomStream{13, 0});
    const int dim = 3;
    const Eigen::MatrixXcd v = sample_haar_unitary(dim, rng);
    const int n = 100000;
    std::vector<double> plain, rotated;
    plain.reserve(n);
    rotated.reserve(n);
    for (int i = 0; i < n; ++i) {
        Eigen::MatrixXcd u = sample_haar_unitary(dim, rng);
        plain.push_back(u.trace().real());
        rotated.push_back((v * u).trace().real());
    }
    CHECK(two_sample_ks(plain, rotated) < 0.02);
}

TEST_CASE("haar states are normalized with mean component weight 1/D") {
    Rng rng(RandomStream{14, 0});
    const int dim = 16;
    double sum = 0.0;
    const int n = 2000;
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXcd psi = sample_haar_state(dim, rng);
        CHECK(std::fabs(psi.norm() - 1.0) < 1e-12);
        sum += std::norm(psi(i % dim));
    }
    CHECK(std::fabs(sum / n - 1.0 / dim) < 0.005);
}

TEST_CASE("porter_thomas_ks self-test on exact Exp(1)/D draws") {
    Rng rng(RandomStream{15, 0});
    const int dim = 64;
    std::vector<double> samples;
    for (int i = 0; i < 200000; ++i) {
        double u;
        do {
            u = rng.uniform();
        } while (u <= 0.0);
        samples.push_back(std::min(-std::log(u) / dim, 1.0));
    }
    CHECK(porter_thomas_ks(samples, dim) < 0.01);
}

TEST_CASE("porter_thomas_ks of constant samples equals the direct CDF gap") {
    const int dim = 10;
    std::vector<double> samples(5, 1.0 / dim);
    // All mass at x = 1/D: the empirical CDF jumps 0 -> 1 there while the
    // Exp(1) CDF is 1 - e^{-1}.
    double expected = std::max(1.0 - std::exp(-1.0), std::exp(-1.0));
    CHECK(porter_thomas_ks(samples, dim) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("haar-state Born probabilities follow Porter-Thomas") {
    Rng rng(RandomStream{16, 0});
    const int dim = 1024;
    std::vector<double> samples;
    samples.reserve(100 * dim);
    for (int rep = 0; rep < 100; ++rep) {
        Eigen::VectorXcd psi = sample_haar_state(dim, rng);
        for (int m = 0; m < dim; ++m) samples.push_back(std::norm(psi(m)));
    }
    CHECK(porter_thomas_ks(samples, dim) < 0.01);
}

TEST_CASE("input validation") {
    Rng rng(RandomStream{17, 0});
    CHECK_THROWS(sample_haar_unitary(0, rng));
    CHECK_THROWS(sample_haar_state(0, rng));
    CHECK_THROWS(porter_thomas_ks({}, 4));
    CHECK_THROWS(porter_thomas_ks({1.5}, 4));
}
