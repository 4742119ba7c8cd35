#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mlab/haar.hpp"
#include "mlab/learn.hpp"
#include "mlab/random.hpp"
#include "mlab/stats.hpp"

using namespace mlab;

namespace {

CircuitSpec make_spec(int L, int depth, double p, std::uint64_t seed) {
    CircuitSpec spec;
    spec.num_sites = L;
    spec.local_dim = 2;
    spec.depth = depth;
    spec.meas_rate = p;
    spec.gate_seed = RandomStream{seed, 1};
    spec.meas_seed = RandomStream{seed, 2};
    return spec;
}

}  // namespace

TEST_CASE("identical hypotheses give posterior 1/2 and coin-flip accuracy") {
    Rng rng(RandomStream{91, 0});
    QuditState state(3, 2);
    int correct = 0;
    const int n = 2000;
    for (int i = 0; i < n; ++i) {
        CircuitSpec spec = make_spec(3, 2, 0.5, 91 + i);
        GameResult result = monitored_game(spec, state, state, rng);
        CHECK(result.posterior_correct == 0.5);
        CHECK_FALSE(result.dead_hypothesis);
        if (result.correct) ++correct;
    }
    // Fair coin: 2000 flips, 4 sigma ~ 0.045.
    CHECK(std::fabs(correct / static_cast<double>(n) - 0.5) < 0.045);
}

TEST_CASE("p=0 carries no information: exact ties for any pair") {
    Rng rng(RandomStream{92, 0});
    CircuitSpec spec = make_spec(4, 3, 0.0, 92);
    int correct = 0;
    const int n = 2000;
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXcd a = sample_haar_state(16, rng);
        Eigen::VectorXcd b = sample_haar_state(16, rng);
        GameResult result = monitored_game(spec, QuditState::from_amplitudes(4, 2, a),
                                           QuditState::from_amplitudes(4, 2, b), rng);
        CHECK(result.posterior_correct == 0.5);
        CHECK(result.log_likelihood_truth == 0.0);
        CHECK(result.log_likelihood_other == 0.0);
        if (result.correct) ++correct;
    }
    CHECK(std::fabs(correct / static_cast<double>(n) - 0.5) < 0.045);
}

TEST_CASE("single-shot game matches the exact per-pair accuracy formula") {
    // Independent oracle: for a known pair the accuracy is
    // (1/2) sum_m max(p_psi(m), p_phi(m)) and the mean posterior is
    // (1/2) sum_m (p_psi^2 + p_phi^2) / (p_psi + p_phi); average both over
    // fresh Haar pairs and compare against played games.
    const int dim = 4;
    const int n = 40000;
    Rng rng(RandomStream{93, 0});
    std::vector<double> played_correct, played_posterior;
    for (int i = 0; i < n; ++i) {
        GameResult result = single_shot_game(dim, rng, false);
        played_correct.push_back(result.correct ? 1.0 : 0.0);
        played_posterior.push_back(result.posterior_correct);
    }
    Rng oracle_rng(RandomStream{94, 0});
    std::vector<double> oracle_acc, oracle_cred;
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXcd psi = sample_haar_state(dim, oracle_rng);
        Eigen::VectorXcd phi = sample_haar_state(dim, oracle_rng);
        double acc = 0.0, cred = 0.0;
        for (int m = 0; m < dim; ++m) {
            const double a = std::norm(psi(m));
            const double b = std::norm(phi(m));
            acc += 0.5 * std::max(a, b);
            cred += 0.5 * (a * a + b * b) / (a + b);
        }
        oracle_acc.push_back(acc);
        oracle_cred.push_back(cred);
    }
    const MeanStdErr mc = mean_with_jackknife_se(played_correct);
    const MeanStdErr mp = mean_with_jackknife_se(played_posterior);
    const MeanStdErr oa = mean_with_jackknife_se(oracle_acc);
    const MeanStdErr oc = mean_with_jackknife_se(oracle_cred);
    CHECK(std::fabs(mc.mean - oa.mean) <
          4.0 * std::sqrt(mc.std_error * mc.std_error + oa.std_error * oa.std_error));
    CHECK(std::fabs(mp.mean - oc.mean) <
          4.0 * std::sqrt(mp.std_error * mp.std_error + oc.std_error * oc.std_error));
    CHECK_THROWS(single_shot_game(1, rng));
}

TEST_CASE("the max-posterior guess is calibrated: P(correct) = E[max posterior]") {
    // The posterior of the *chosen* hypothesis is max(q, 1-q) where q is the
    // posterior of the truth; a calibrated Bayesian wins exactly that often.
    for (bool orthogonal : {false, true}) {
        Rng rng(RandomStream{95, orthogonal ? 1u : 0u});
        const int n = 30000;
        std::vector<double> correct, chosen;
        for (int i = 0; i < n; ++i) {
            GameResult result = single_shot_game(8, rng, orthogonal);
            correct.push_back(result.correct ? 1.0 : 0.0);
            chosen.push_back(std::max(result.posterior_correct, 1.0 - result.posterior_correct));
        }
        const MeanStdErr mc = mean_with_jackknife_se(correct);
        const MeanStdErr mp = mean_with_jackknife_se(chosen);
        CHECK(std::fabs(mc.mean - mp.mean) <
              4.0 * std::sqrt(mc.std_error * mc.std_error + mp.std_error * mp.std_error));
    }
}

TEST_CASE("monitored game at p=1 reduces to the single-shot orthogonal game") {
    // The first full measurement round projects both hypotheses onto the same
    // basis state, so all later rounds are shared and the game is decided by
    // one computational-basis measurement of an orthogonal Haar pair rotated
    // by the first gate layer, i.e. the single-shot game at D = 2^L.
    const int L = 6;
    const int dim = 64;
    const int games = 3000;
    Rng rng(RandomStream{96, 0});
    std::vector<double> monitored;
    for (int i = 0; i < games; ++i) {
        CircuitSpec spec = make_spec(L, 1, 1.0, 9600 + i);
        Eigen::VectorXcd a = sample_haar_state(dim, rng);
        Eigen::VectorXcd b = sample_haar_state(dim, rng);
        b -= a * a.dot(b);
        b /= b.norm();
        GameResult result = monitored_game(spec, QuditState::from_amplitudes(L, 2, a),
                                           QuditState::from_amplitudes(L, 2, b), rng);
        monitored.push_back(result.correct ? 1.0 : 0.0);
    }
    Rng ss_rng(RandomStream{97, 0});
    std::vector<double> single;
    for (int i = 0; i < 30000; ++i)
        single.push_back(single_shot_game(dim, ss_rng, true).correct ? 1.0 : 0.0);
    const MeanStdErr mm = mean_with_jackknife_se(monitored);
    const MeanStdErr ms = mean_with_jackknife_se(single);
    CHECK(std::fabs(mm.mean - ms.mean) <
          4.0 * std::sqrt(mm.std_error * mm.std_error + ms.std_error * ms.std_error));
    // Sanity: well above chance and near the 3/4 asymptote.
    CHECK(mm.mean > 0.7);
    CHECK(mm.mean < 0.8);
}

TEST_CASE("accuracy curve: shape, determinism, and information monotonicity") {
    const std::vector<int> sizes{4};
    const std::vector<double> p_grid{0.0, 1.0};
    auto depth_rule = [](int length) { return length / 2; };
    auto table = accuracy_curve(sizes, p_grid, depth_rule, 400, RandomStream{98, 0}, 2);
    REQUIRE(table.size() == 2);
    CHECK(table[0].num_sites == 4);
    CHECK(table[0].p == 0.0);
    CHECK(table[1].p == 1.0);
    CHECK(table[0].games == 400);
    // p=0: pure coin, credence exactly 1/2.
    CHECK(table[0].credence == 0.5);
    CHECK(std::fabs(table[0].accuracy - 0.5) < 0.1);
    // p=1 is far more informative than p=0.
    CHECK(table[1].accuracy > table[0].accuracy + 3.0 * table[1].std_error);
    CHECK(table[1].credence > 0.55);
    for (const auto& pt : table) {
        CHECK(pt.std_error == doctest::Approx(std::sqrt(pt.accuracy * (1.0 - pt.accuracy) /
                                                        static_cast<double>(pt.games))));
    }
    auto again = accuracy_curve(sizes, p_grid, depth_rule, 400, RandomStream{98, 0}, 1);
    REQUIRE(again.size() == table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        CHECK(again[i].accuracy == table[i].accuracy);
        CHECK(again[i].credence == table[i].credence);
    }
    CHECK_THROWS(accuracy_curve({}, p_grid, depth_rule, 10, RandomStream{98, 0}));
    CHECK_THROWS(accuracy_curve(sizes, p_grid, depth_rule, 0, RandomStream{98, 0}));
}
