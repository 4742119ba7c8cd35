#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "mlab/haar.hpp"
#include "mlab/qstate.hpp"
#include "mlab/random.hpp"

using namespace mlab;

namespace {

QuditState random_state(int num_sites, int local_dim, Rng& rng) {
    Eigen::Index dim = 1;
    for (int i = 0; i < num_sites; ++i) dim *= local_dim;
    return QuditState::from_amplitudes(num_sites, local_dim,
                                       sample_haar_state(static_cast<int>(dim), rng));
}

QuditState bell_pair() {
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
    amps(0) = amps(3) = 1.0;
    return QuditState::from_amplitudes(2, 2, amps);
}

}  // namespace

TEST_CASE("product states place a single amplitude") {
    QuditState a = QuditState::product_state(1, 2, {0});
    CHECK(a.amplitudes()(0) == std::complex<double>(1.0, 0.0));
    CHECK(a.amplitudes()(1) == std::complex<double>(0.0, 0.0));
    CHECK(a.log_weight() == 0.0);

    QuditState b = QuditState::product_state(2, 2, {1, 0});
    CHECK(b.amplitudes()(2) == std::complex<double>(1.0, 0.0));
    CHECK(b.amplitudes().cwiseAbs().sum() == doctest::Approx(1.0));

    QuditState c = QuditState::product_state(3, 3, {2, 2, 2});
    CHECK(c.amplitudes()(26) == std::complex<double>(1.0, 0.0));

    CHECK_THROWS(QuditState::product_state(2, 2, {2, 0}));
    CHECK_THROWS(QuditState::product_state(2, 2, {0}));
}

TEST_CASE("identity and SWAP gates act as expected") {
    QuditState state = QuditState::product_state(2, 2, {1, 0});
    state.apply_two_site_gate(Eigen::MatrixXcd::Identity(4, 4), 0);
    CHECK(state.amplitudes()(2) == std::complex<double>(1.0, 0.0));

    Eigen::MatrixXcd swap = Eigen::MatrixXcd::Zero(4, 4);
    swap(0, 0) = swap(3, 3) = 1.0;
    swap(1, 2) = swap(2, 1) = 1.0;
    state.apply_two_site_gate(swap, 0);
    CHECK(state.amplitudes()(1) == std::complex<double>(1.0, 0.0));  // |10> -> |01>
}

TEST_CASE("gates preserve the norm and reject non-unitaries") {
    Rng rng(RandomStream{31, 0});
    for (int d : {2, 3}) {
        QuditState state = random_state(4, d, rng);
        for (int rep = 0; rep < 50; ++rep) {
            Eigen::MatrixXcd gate = sample_haar_unitary(d * d, rng);
            state.apply_two_site_gate(gate, rep % 3);
        }
        CHECK(std::fabs(state.amplitudes().norm() - 1.0) < 1e-9);
    }
    QuditState state = QuditState(2, 2);
    CHECK_THROWS(state.apply_two_site_gate(Eigen::MatrixXcd::Ones(4, 4), 0));
    CHECK_THROWS(state.apply_two_site_gate(Eigen::MatrixXcd::Identity(4, 4), 1));
}

TEST_CASE("gate placement matches an explicit kron construction") {
    Rng rng(RandomStream{32, 0});
    // L = 3 qubits: act on sites (1, 2) and compare against I x G applied to
    // the full vector by direct index arithmetic.
    Eigen::MatrixXcd gate = sample_haar_unitary(4, rng);
    QuditState state = random_state(3, 2, rng);
    Eigen::VectorXcd before = state.amplitudes();
    state.apply_two_site_gate(gate, 1);
    for (int a = 0; a < 2; ++a)
        for (int r = 0; r < 4; ++r) {
            std::complex<double> expect = 0.0;
            for (int c = 0; c < 4; ++c) expect += gate(r, c) * before(a * 4 + c);
            CHECK(std::abs(state.amplitudes()(a * 4 + r) - expect) < 1e-12);
        }
    // And on sites (0, 1): G x I.
    QuditState state2 = QuditState::from_amplitudes(3, 2, before);
    state2.apply_two_site_gate(gate, 0);
    for (int r = 0; r < 4; ++r)
        for (int b = 0; b < 2; ++b) {
            std::complex<double> expect = 0.0;
            for (int c = 0; c < 4; ++c) expect += gate(r, c) * before(c * 2 + b);
            CHECK(std::abs(state2.amplitudes()(r * 2 + b) - expect) < 1e-12);
        }
}

TEST_CASE("Born probabilities are complete") {
    Rng rng(RandomStream{33, 0});
    for (int d : {2, 3}) {
        QuditState state = random_state(3, d, rng);
        for (int site = 0; site < 3; ++site) {
            auto probs = state.outcome_probabilities(site);
            double total = 0.0;
            for (double p : probs) total += p;
            CHECK(std::fabs(total - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("measuring an eigenstate is deterministic and free") {
    Rng rng(RandomStream{34, 0});
    QuditState state = QuditState::product_state(2, 2, {0, 1});
    CHECK(state.measure_site(0, rng) == 0);
    CHECK(state.measure_site(1, rng) == 1);
    CHECK(state.log_weight() == doctest::Approx(0.0));
}

TEST_CASE("measuring the plus state costs ln(1/2)") {
    Rng rng(RandomStream{35, 0});
    Eigen::VectorXcd amps(2);
    amps << 1.0, 1.0;
    QuditState state = QuditState::from_amplitudes(1, 2, amps);
    state.measure_site(0, rng);
    CHECK(state.log_weight() == doctest::Approx(std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("forced measurements: dead branches and completeness") {
    QuditState zero = QuditState::product_state(1, 2, {0});
    QuditState dead = zero;
    CHECK_FALSE(dead.measure_site_forced(0, 1));
    CHECK(dead.dead_branch());
    QuditState alive = zero;
    CHECK(alive.measure_site_forced(0, 0));
    CHECK(alive.log_weight() == doctest::Approx(0.0));

    Rng rng(RandomStream{36, 0});
    QuditState state = random_state(3, 2, rng);
    for (int site = 0; site < 3; ++site) {
        double total = 0.0;
        for (int outcome = 0; outcome < 2; ++outcome) {
            QuditState branch = state;
            if (branch.measure_site_forced(site, outcome))
                total += std::exp(branch.log_weight() - state.log_weight());
        }
        CHECK(std::fabs(total - 1.0) < 1e-12);
    }
}

TEST_CASE("reduced density matrices are Hermitian PSD with unit trace") {
    Rng rng(RandomStream{37, 0});
    QuditState state = random_state(4, 2, rng);
    for (const Region& region :
         {Region({0}), Region({1, 3}), Region::range(0, 2), Region::range(1, 4)}) {
        Eigen::MatrixXcd rho = state.reduced_density_matrix(region);
        CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::fabs(rho.trace().real() - 1.0) < 1e-10);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
        CHECK(solver.eigenvalues().minCoeff() > -1e-10);
    }
}

TEST_CASE("product-state RDM is a rank-1 projector; Bell pair is maximally mixed") {
    QuditState prod = QuditState::product_state(3, 2, {1, 0, 1});
    Eigen::MatrixXcd rho = prod.reduced_density_matrix(Region::range(0, 2));
    CHECK((rho * rho - rho).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::fabs(rho.trace().real() - 1.0) < 1e-12);

    Eigen::MatrixXcd bell = bell_pair().reduced_density_matrix(Region({0}));
    CHECK((bell - 0.5 * Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("RDM eigenvalues match squared Schmidt coefficients from an SVD") {
    Rng rng(RandomStream{38, 0});
    QuditState state = random_state(4, 2, rng);
    Eigen::MatrixXcd rho = state.reduced_density_matrix(Region::range(0, 2));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
    // Independent oracle: SVD of the amplitude matrix psi(a, e).
    Eigen::MatrixXcd m(4, 4);
    for (int a = 0; a < 4; ++a)
        for (int e = 0; e < 4; ++e) m(a, e) = state.amplitudes()(a * 4 + e);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    Eigen::VectorXd schmidt = svd.singularValues();
    for (int i = 0; i < 4; ++i) {
        double expected = schmidt(3 - i) * schmidt(3 - i);  // ascending vs descending
        CHECK(std::fabs(solver.eigenvalues()(i) - expected) < 1e-10);
    }
}

TEST_CASE("entropies: product, Bell, and Renyi index behavior") {
    QuditState prod = QuditState::product_state(3, 2, {0, 1, 0});
    for (int n : {0, 1, 2, 3}) {
        CHECK(std::fabs(prod.renyi_entropy(Region::range(0, 2), n)) < 1e-10);
    }
    QuditState bell = bell_pair();
    for (int n : {0, 1, 2, 3})
        CHECK(bell.renyi_entropy(Region({0}), n) ==
              doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(prod.purity(Region::range(0, 2)) == doctest::Approx(1.0));
    CHECK(bell.purity(Region({0})) == doctest::Approx(0.5));
}

TEST_CASE("pure-state symmetry, Renyi ordering, and purity consistency") {
    Rng rng(RandomStream{39, 0});
    for (int rep = 0; rep < 100; ++rep) {
        QuditState state = random_state(4, 2, rng);
        const Region a = Region::range(0, rep % 3 + 1);
        const Region abar = a.complement(4);
        for (int n : {1, 2, 3})
            CHECK(std::fabs(state.renyi_entropy(a, n) - state.renyi_entropy(abar, n)) < 1e-9);
        const double s0 = state.renyi_entropy(a, 0);
        const double s1 = state.renyi_entropy(a, 1);
        const double s2 = state.renyi_entropy(a, 2);
        const double s3 = state.renyi_entropy(a, 3);
        CHECK(s1 <= s0 + 1e-9);
        CHECK(s2 <= s1 + 1e-9);
        CHECK(s3 <= s2 + 1e-9);
        CHECK(std::fabs(state.purity(a) - std::exp(-s2)) < 1e-10);
        CHECK(std::fabs(state.purity(a) - state.purity(abar)) < 1e-10);
    }
}

TEST_CASE("non-contiguous regions agree between purity paths") {
    Rng rng(RandomStream{40, 0});
    QuditState state = random_state(5, 2, rng);
    // {0,2,4} exercises the gather path; its complement the same.
    const Region odd({0, 2, 4});
    CHECK(std::fabs(state.purity(odd) - state.purity(odd.complement(5))) < 1e-10);
    CHECK(std::fabs(state.purity(odd) - std::exp(-state.renyi_entropy(odd, 2))) < 1e-10);
}

TEST_CASE("region caps and validation") {
    QuditState big(13, 2);
    CHECK_THROWS(big.reduced_density_matrix(Region::range(0, 13)));
    CHECK_THROWS(big.purity(Region::range(0, 13)));
    CHECK_THROWS(Region({2, 1}));
    CHECK_THROWS(QuditState(2, 2).purity(Region({5})));
}
