#ifndef MLAB_LEARN_HPP
#define MLAB_LEARN_HPP

#include <functional>
#include <vector>

#include "mlab/circuit.hpp"
#include "mlab/random.hpp"

namespace mlab {

/// One round of a two-hypothesis Bayesian discrimination game. The posterior
/// assigned to the true hypothesis follows from the two log likelihoods with
/// a flat prior; exactly tied likelihoods are resolved by a fair coin, so the
/// no-information case sits at accuracy 1/2 exactly.
struct GameResult {
    bool correct = false;
    double posterior_correct = 0.5;
    double log_likelihood_truth = 0.0;
    double log_likelihood_other = 0.0;
    /// The recorded outcomes had probability < 1e-300 under the wrong
    /// hypothesis; posterior_correct is then 1 (infinite evidence).
    bool dead_hypothesis = false;
};

/// Single-shot game: two Haar states of dimension D, one computational-basis
/// measurement of the truth, maximum-likelihood guess. orthogonal_pair
/// Gram-Schmidts the second state against the first, which is the p = 1
/// limit of the monitored game.
GameResult single_shot_game(int dim, Rng& rng, bool orthogonal_pair = false);

/// Monitored-dynamics game: a Born-sampled trajectory of the true initial
/// state produces the outcome record; the other hypothesis is replayed with
/// the outcomes imposed, and the guess compares the two log Born weights.
/// Both hypotheses share every gate and measurement position.
GameResult monitored_game(const CircuitSpec& spec, const QuditState& state_a,
                          const QuditState& state_b, Rng& rng);

struct AccuracyPoint {
    int num_sites = 0;
    double p = 0.0;
    double accuracy = 0.0;
    double credence = 0.0;
    double std_error = 0.0;  // binomial standard error of the accuracy
    std::size_t games = 0;
};

/// Accuracy/credence table of the monitored game over (L, p) grids with
/// orthogonal Haar initial pairs resampled per game. depth_rule maps L to
/// the circuit depth.
std::vector<AccuracyPoint> accuracy_curve(const std::vector<int>& sizes,
                                          const std::vector<double>& p_grid,
                                          const std::function<int(int)>& depth_rule,
                                          int games_per_point, RandomStream stream,
                                          int workers = 1);

}  // namespace mlab

#endif
