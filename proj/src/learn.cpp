#include "mlab/learn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mlab/haar.hpp"
#include "mlab/stats.hpp"

namespace mlab {

namespace {

/// Resolve a game from the two log likelihoods (truth first).
GameResult decide(double log_truth, double log_other, bool dead, Rng& rng) {
    GameResult result;
    result.log_likelihood_truth = log_truth;
    result.log_likelihood_other = log_other;
    result.dead_hypothesis = dead;
    if (dead) {
        result.posterior_correct = 1.0;
        result.correct = true;
        return result;
    }
    if (log_truth == log_other) {
        result.posterior_correct = 0.5;
        result.correct = rng.bernoulli(0.5);
    } else {
        result.posterior_correct = std::exp(log_truth - log_sum_exp(log_truth, log_other));
        result.correct = log_truth > log_other;
    }
    return result;
}

}  // namespace

GameResult single_shot_game(int dim, Rng& rng, bool orthogonal_pair) {
    if (dim < 2) throw std::invalid_argument("single_shot_game: dim < 2");
    Eigen::VectorXcd psi = sample_haar_state(dim, rng);
    Eigen::VectorXcd phi = sample_haar_state(dim, rng);
    if (orthogonal_pair) {
        phi -= psi * psi.dot(phi);
        phi /= phi.norm();
    }
    const bool truth_is_psi = rng.bernoulli(0.5);
    const Eigen::VectorXcd& truth = truth_is_psi ? psi : phi;
    const Eigen::VectorXcd& other = truth_is_psi ? phi : psi;
    std::vector<double> probs(dim);
    for (int m = 0; m < dim; ++m) probs[m] = std::norm(truth(m));
    const int outcome = static_cast<int>(rng.discrete(probs));
    const double p_truth = std::norm(truth(outcome));
    const double p_other = std::norm(other(outcome));
    const bool dead = p_other < 1e-300;
    return decide(std::log(p_truth), dead ? -std::numeric_limits<double>::infinity()
                                          : std::log(p_other),
                  dead, rng);
}

GameResult monitored_game(const CircuitSpec& spec, const QuditState& state_a,
                          const QuditState& state_b, Rng& rng) {
    const bool truth_is_a = rng.bernoulli(0.5);
    const QuditState& truth = truth_is_a ? state_a : state_b;
    const QuditState& other = truth_is_a ? state_b : state_a;
    TrajectoryResult truth_run = run_trajectory(spec, truth, rng);
    TrajectoryResult other_run = replay_trajectory(spec, other, truth_run.record);
    const bool dead = other_run.final_state.dead_branch();
    return decide(truth_run.log_born, other_run.log_born, dead, rng);
}

std::vector<AccuracyPoint> accuracy_curve(const std::vector<int>& sizes,
                                          const std::vector<double>& p_grid,
                                          const std::function<int(int)>& depth_rule,
                                          int games_per_point, RandomStream stream,
                                          int workers) {
    if (sizes.empty() || p_grid.empty() || games_per_point < 1)
        throw std::invalid_argument("accuracy_curve: empty grid or no games");
    std::vector<AccuracyPoint> table;
    for (std::size_t s = 0; s < sizes.size(); ++s) {
        const int length = sizes[s];
        const int depth = depth_rule(length);
        Eigen::Index dim = 1;
        for (int i = 0; i < length; ++i) dim *= 2;
        for (std::size_t k = 0; k < p_grid.size(); ++k) {
            const std::uint64_t point = s * p_grid.size() + k;
            std::vector<double> correct(games_per_point, 0.0);
            std::vector<double> posterior(games_per_point, 0.0);
            parallel_for(static_cast<std::size_t>(games_per_point), workers,
                         [&](std::size_t game) {
                             Rng rng(substream(stream, point, game));
                             CircuitSpec spec;
                             spec.num_sites = length;
                             spec.local_dim = 2;
                             spec.depth = depth;
                             spec.meas_rate = p_grid[k];
                             spec.gate_seed = substream(stream, point * 2 + 1, game);
                             spec.meas_seed = substream(stream, point * 2 + 2, game);
                             Eigen::VectorXcd a = sample_haar_state(static_cast<int>(dim), rng);
                             Eigen::VectorXcd b = sample_haar_state(static_cast<int>(dim), rng);
                             b -= a * a.dot(b);
                             b /= b.norm();
                             const GameResult result = monitored_game(
                                 spec, QuditState::from_amplitudes(length, 2, a),
                                 QuditState::from_amplitudes(length, 2, b), rng);
                             correct[game] = result.correct ? 1.0 : 0.0;
                             posterior[game] = result.posterior_correct;
                         });
            AccuracyPoint pt;
            pt.num_sites = length;
            pt.p = p_grid[k];
            pt.games = static_cast<std::size_t>(games_per_point);
            for (int i = 0; i < games_per_point; ++i) {
                pt.accuracy += correct[i];
                pt.credence += posterior[i];
            }
            pt.accuracy /= games_per_point;
            pt.credence /= games_per_point;
            pt.std_error = std::sqrt(pt.accuracy * (1.0 - pt.accuracy) /
                                     static_cast<double>(games_per_point));
            table.push_back(pt);
        }
    }
    return table;
}

}  // namespace mlab
