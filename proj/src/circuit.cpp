#include "mlab/circuit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mlab/haar.hpp"

namespace mlab {

namespace {

void check_spec(const CircuitSpec& spec) {
    if (spec.num_sites < 2) throw std::invalid_argument("CircuitSpec: num_sites < 2");
    if (spec.local_dim < 2) throw std::invalid_argument("CircuitSpec: local_dim < 2");
    if (spec.depth < 0) throw std::invalid_argument("CircuitSpec: negative depth");
    if (spec.meas_rate < 0.0 || spec.meas_rate > 1.0)
        throw std::invalid_argument("CircuitSpec: meas_rate outside [0,1]");
}

void check_initial(const CircuitSpec& spec, const QuditState& state) {
    if (state.local_dim() != spec.local_dim)
        throw std::invalid_argument("run_trajectory: local_dim mismatch");
    if (state.num_sites() < spec.num_sites)
        throw std::invalid_argument("run_trajectory: initial state has too few sites");
}

void apply_layer_gates(QuditState& state, const CircuitSpec& spec, int layer) {
    for (int left = layer_offset(layer); left + 1 < spec.num_sites; left += 2)
        state.apply_two_site_gate_unchecked(circuit_gate(spec, layer, left), left);
}

}  // namespace

Eigen::MatrixXcd circuit_gate(const CircuitSpec& spec, int layer, int left_site) {
    Rng rng(substream(spec.gate_seed, static_cast<std::uint64_t>(layer),
                      static_cast<std::uint64_t>(left_site)));
    return sample_haar_unitary(spec.local_dim * spec.local_dim, rng);
}

std::vector<int> layer_measured_sites(const CircuitSpec& spec, int layer) {
    Rng rng(substream(spec.meas_seed, static_cast<std::uint64_t>(layer)));
    std::vector<int> sites;
    for (int s = 0; s < spec.num_sites; ++s)
        if (rng.bernoulli(spec.meas_rate)) sites.push_back(s);
    return sites;
}

std::vector<std::pair<int, int>> measurement_layout(const CircuitSpec& spec) {
    std::vector<std::pair<int, int>> layout;
    for (int layer = 1; layer <= num_layers(spec); ++layer)
        for (int s : layer_measured_sites(spec, layer)) layout.emplace_back(layer, s);
    return layout;
}

TrajectoryResult run_trajectory(const CircuitSpec& spec, QuditState state, Rng& rng,
                                const std::function<void(int, const QuditState&)>& per_step) {
    check_spec(spec);
    check_initial(spec, state);
    MeasurementRecord record;
    for (int layer = 1; layer <= num_layers(spec); ++layer) {
        apply_layer_gates(state, spec, layer);
        for (int site : layer_measured_sites(spec, layer)) {
            record.layout.emplace_back(layer, site);
            int outcome = state.measure_site(site, rng);
            record.events.push_back({layer, site, outcome});
        }
        if (per_step && layer % 2 == 0) per_step(layer / 2, state);
    }
    double log_born = state.log_weight();
    return {std::move(state), std::move(record), log_born};
}

TrajectoryResult replay_trajectory(const CircuitSpec& spec, QuditState state,
                                   const MeasurementRecord& record) {
    check_spec(spec);
    check_initial(spec, state);
    std::size_t next_event = 0;
    for (int layer = 1; layer <= num_layers(spec); ++layer) {
        apply_layer_gates(state, spec, layer);
        while (next_event < record.events.size() &&
               record.events[next_event].layer == layer) {
            const MeasurementEvent& ev = record.events[next_event++];
            if (!state.measure_site_forced(ev.site, ev.outcome)) {
                double log_born = -std::numeric_limits<double>::infinity();
                return {std::move(state), record, log_born};
            }
        }
    }
    double log_born = state.log_weight();
    return {std::move(state), record, log_born};
}

std::vector<Branch> enumerate_branches(const CircuitSpec& spec, const QuditState& initial) {
    check_spec(spec);
    check_initial(spec, initial);
    const auto layout = measurement_layout(spec);
    const int m = static_cast<int>(layout.size());
    if (m > 12) throw std::invalid_argument("enumerate_branches: more than 12 measurements");
    std::size_t branch_count = 1;
    for (int i = 0; i < m; ++i) branch_count *= static_cast<std::size_t>(spec.local_dim);

    std::vector<Branch> branches;
    branches.reserve(branch_count);
    std::vector<int> outcomes(m, 0);
    for (std::size_t b = 0; b < branch_count; ++b) {
        MeasurementRecord record;
        record.layout = layout;
        for (int i = 0; i < m; ++i)
            record.events.push_back({layout[i].first, layout[i].second, outcomes[i]});
        TrajectoryResult result = replay_trajectory(spec, initial, record);
        double prob = result.final_state.dead_branch() ? 0.0 : std::exp(result.log_born);
        branches.push_back({std::move(result.record), prob, std::move(result.final_state)});
        // Odometer over outcome strings, last measurement fastest.
        int pos = m - 1;
        while (pos >= 0 && ++outcomes[pos] == spec.local_dim) outcomes[pos--] = 0;
    }
    return branches;
}

std::vector<MeanStdErr> purity_growth_estimator(int num_sites, int local_dim, int t_max,
                                                int num_samples, int cut, RandomStream stream,
                                                int workers) {
    if (cut < 1 || cut >= num_sites)
        throw std::invalid_argument("purity_growth_estimator: cut must split the chain");
    if (t_max < 1 || num_samples < 2)
        throw std::invalid_argument("purity_growth_estimator: need t_max >= 1, samples >= 2");
    std::vector<MeanStdErr> out;
    out.reserve(t_max);
    for (int t = 1; t <= t_max; ++t) {
        // Exact causal-cone reduction: when both sides of the cut are deeper
        // than the 2t-site light cone, only the 4t+2 sites around the cut
        // matter and the sample distribution on the window is identical. The
        // window cut keeps the parity of the original cut, because parity
        // decides which layers' gates straddle it.
        int window = num_sites;
        int wcut = cut;
        if (std::min(cut, num_sites - cut) > 2 * t) {
            window = 4 * t + 2;
            wcut = 2 * t + (cut % 2);
        }
        std::vector<double> purities(num_samples, 0.0);
        const Region region = Region::range(0, wcut);
        parallel_for(static_cast<std::size_t>(num_samples), workers, [&](std::size_t i) {
            CircuitSpec spec;
            spec.num_sites = window;
            spec.local_dim = local_dim;
            spec.depth = t;
            spec.meas_rate = 0.0;
            spec.gate_seed = substream(stream, static_cast<std::uint64_t>(t), i);
            spec.meas_seed = substream(stream, 0, 0);  // unused at rate 0
            Rng rng(substream(stream, static_cast<std::uint64_t>(t) + 1000, i));
            QuditState state(window, local_dim);
            TrajectoryResult result = run_trajectory(spec, std::move(state), rng);
            purities[i] = result.final_state.purity(region);
        });
        out.push_back(mean_with_jackknife_se(purities));
    }
    return out;
}

std::vector<MeanStdErr> entanglement_growth_curve(const CircuitSpec& spec, const Region& region,
                                                  int renyi_n, int num_samples,
                                                  RandomStream stream, int workers) {
    check_spec(spec);
    if (num_samples < 2)
        throw std::invalid_argument("entanglement_growth_curve: need at least 2 samples");
    // entries[t][i]: entropy of sample i after step t.
    std::vector<std::vector<double>> entries(spec.depth + 1,
                                             std::vector<double>(num_samples, 0.0));
    parallel_for(static_cast<std::size_t>(num_samples), workers, [&](std::size_t i) {
        CircuitSpec sample_spec = spec;
        sample_spec.gate_seed = substream(spec.gate_seed, i);
        sample_spec.meas_seed = substream(spec.meas_seed, i);
        Rng rng(substream(stream, i));
        QuditState state(spec.num_sites, spec.local_dim);
        entries[0][i] = 0.0;  // product initial state
        run_trajectory(sample_spec, std::move(state), rng,
                       [&](int t, const QuditState& s) {
                           entries[static_cast<std::size_t>(t)][i] =
                               s.renyi_entropy(region, renyi_n);
                       });
    });
    std::vector<MeanStdErr> out;
    out.reserve(entries.size());
    for (const auto& row : entries) out.push_back(mean_with_jackknife_se(row));
    return out;
}

std::vector<double> ancilla_probe_run(const CircuitSpec& spec, Rng& rng, bool haar_pair) {
    check_spec(spec);
    const int L = spec.num_sites;
    const int d = spec.local_dim;
    Eigen::Index sys_dim = 1;
    for (int i = 0; i < L; ++i) sys_dim *= d;

    Eigen::VectorXcd phi, psi;
    if (haar_pair) {
        phi = sample_haar_state(static_cast<int>(sys_dim), rng);
        psi = sample_haar_state(static_cast<int>(sys_dim), rng);
        psi -= phi * phi.dot(psi);  // Gram-Schmidt: exactly orthogonal pair
        psi /= psi.norm();
    } else {
        phi = Eigen::VectorXcd::Zero(sys_dim);
        psi = Eigen::VectorXcd::Zero(sys_dim);
        phi(0) = 1.0;                       // |00...0>
        psi(sys_dim / d) = 1.0;             // |10...0>
    }
    // Ancilla is the last (least significant) site; only its levels 0 and 1
    // are populated, so it behaves as a qubit of entropy at most ln 2.
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(sys_dim * d);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (Eigen::Index s = 0; s < sys_dim; ++s) {
        amps(s * d + 0) = phi(s) * inv_sqrt2;
        amps(s * d + 1) = psi(s) * inv_sqrt2;
    }
    QuditState state = QuditState::from_amplitudes(L + 1, d, std::move(amps));

    const Region ancilla({L});
    std::vector<double> entropy(spec.depth + 1, 0.0);
    entropy[0] = state.renyi_entropy(ancilla, 1);
    run_trajectory(spec, std::move(state), rng, [&](int t, const QuditState& s) {
        entropy[static_cast<std::size_t>(t)] = s.renyi_entropy(ancilla, 1);
    });
    return entropy;
}

}  // namespace mlab
