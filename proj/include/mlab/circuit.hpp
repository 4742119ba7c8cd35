#ifndef MLAB_CIRCUIT_HPP
#define MLAB_CIRCUIT_HPP

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "mlab/qstate.hpp"
#include "mlab/random.hpp"
#include "mlab/stats.hpp"

namespace mlab {

/// One brickwork circuit realization. A time step is two layers: gates on
/// (0,1),(2,3),... followed by gates on (1,2),(3,4),..., open boundaries.
/// Layers are numbered 1..2*depth; layer ell acts at offset (ell-1) % 2.
/// After every layer each site is measured independently with probability
/// meas_rate; positions come from meas_seed, gate matrices from gate_seed,
/// so the realization is fully determined by this struct.
struct CircuitSpec {
    int num_sites = 0;
    int local_dim = 2;
    int depth = 0;
    double meas_rate = 0.0;
    RandomStream gate_seed;
    RandomStream meas_seed;
};

struct MeasurementEvent {
    int layer = 0;
    int site = 0;
    int outcome = 0;
};

struct MeasurementRecord {
    /// Measurement positions (layer, site) in circuit order, outcome-free.
    std::vector<std::pair<int, int>> layout;
    std::vector<MeasurementEvent> events;
};

struct TrajectoryResult {
    QuditState final_state;
    MeasurementRecord record;
    double log_born = 0.0;
};

inline int num_layers(const CircuitSpec& spec) { return 2 * spec.depth; }
inline int layer_offset(int layer) { return (layer - 1) % 2; }

/// The Haar gate at (layer, left_site), deterministic in spec.gate_seed.
Eigen::MatrixXcd circuit_gate(const CircuitSpec& spec, int layer, int left_site);

/// Sites measured after the given layer, deterministic in spec.meas_seed.
std::vector<int> layer_measured_sites(const CircuitSpec& spec, int layer);

/// All (layer, site) measurement positions of the realization.
std::vector<std::pair<int, int>> measurement_layout(const CircuitSpec& spec);

/// Born-sampled quantum trajectory. The initial state may carry extra
/// spectator sites beyond spec.num_sites (used by the ancilla probe); gates
/// and measurements only ever touch sites 0..spec.num_sites-1. When per_step
/// is set it is called with (t, state) after each completed time step.
TrajectoryResult run_trajectory(
    const CircuitSpec& spec, QuditState initial, Rng& rng,
    const std::function<void(int, const QuditState&)>& per_step = {});

/// Re-run the same circuit imposing the recorded outcomes on a (possibly
/// different) initial state. The returned log_born is the log likelihood of
/// the record under this hypothesis; a dead branch (outcome of probability
/// < 1e-300) stops the evolution and marks final_state.dead_branch().
TrajectoryResult replay_trajectory(const CircuitSpec& spec, QuditState initial,
                                   const MeasurementRecord& record);

struct Branch {
    MeasurementRecord record;
    double born_prob = 0.0;
    QuditState final_state;
};

/// All d^M measurement branches of a realization with frozen gates and frozen
/// measurement positions; born probabilities sum to 1. Requires M <= 12.
std::vector<Branch> enumerate_branches(const CircuitSpec& spec, const QuditState& initial);

/// Monte-Carlo estimate of the Haar-averaged purity tr rho_A^2 after each of
/// t = 1..t_max steps at measurement rate 0, A = {0..cut-1}. Entry t-1 of the
/// result holds the mean and jackknife standard error over num_samples
/// independent circuits. Exploits the causal cone of the cut: gates strictly
/// inside A or its complement are local unitaries of either factor and cannot
/// change the purity, so each sample at time t is simulated on the 4t+2 sites
/// around the cut whenever both sides are that deep (exact reduction, not an
/// approximation).
std::vector<MeanStdErr> purity_growth_estimator(int num_sites, int local_dim, int t_max,
                                                int num_samples, int cut, RandomStream stream,
                                                int workers = 1);

/// Trajectory-averaged Renyi entropy of `region` after each time step
/// t = 0..spec.depth; gates, layouts and outcomes are all resampled per
/// trajectory from substreams of the spec seeds and `stream`.
std::vector<MeanStdErr> entanglement_growth_curve(const CircuitSpec& spec, const Region& region,
                                                  int renyi_n, int num_samples,
                                                  RandomStream stream, int workers = 1);

/// Reference-ancilla purification probe: the system starts in
/// (|0>|phi> + |1>|psi>)/sqrt(2) with the ancilla stored as one extra site
/// that no gate or measurement ever touches. Returns the von Neumann entropy
/// of the ancilla after each time step, S_R(0) = ln 2 first. phi, psi are
/// orthogonal Haar states when haar_pair is set, otherwise two orthogonal
/// computational-basis product states.
std::vector<double> ancilla_probe_run(const CircuitSpec& spec, Rng& rng, bool haar_pair = true);

}  // namespace mlab

#endif
