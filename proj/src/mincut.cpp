#include "mlab/mincut.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "mlab/stats.hpp"

namespace mlab {

CutGraph build_cut_graph(const CircuitSpec& spec,
                         const std::vector<std::pair<int, int>>& layout) {
    if (spec.num_sites < 1 || spec.depth < 0)
        throw std::invalid_argument("build_cut_graph: bad geometry");
    CutGraph graph;
    graph.num_sites = spec.num_sites;
    graph.layers = num_layers(spec);
    graph.measured.assign(graph.layers + 1, std::vector<bool>(spec.num_sites, false));
    for (const auto& [layer, site] : layout) {
        if (layer < 1 || layer > graph.layers || site < 0 || site >= spec.num_sites)
            throw std::invalid_argument("build_cut_graph: measurement position out of range");
        graph.measured[layer][site] = true;
    }
    return graph;
}

namespace {

/// Capacity of the leg at (band, site).
int leg_capacity(const CutGraph& graph, int band, int site) {
    if (band == 0 && !graph.pinned_bottom) return 0;
    return graph.measured[band][site] ? 0 : 1;
}

/// Whether the dual gap x stays open across the given layer's gate row
/// (closed when a gate spans sites (x-1, x)).
bool gap_open(const CutGraph& graph, int layer, int x) {
    const int offset = (layer - 1) % 2;
    if (x < 1 || x > graph.num_sites - 1) return true;
    return (x - 1 < offset) || ((x - 1 - offset) % 2 != 0);
}

}  // namespace

int minimal_cut(const CutGraph& graph, const Region& region_a) {
    if (region_a.size() == 0) return 0;
    const auto& sites = region_a.sites();
    if (sites.back() - sites.front() + 1 != region_a.size())
        throw std::invalid_argument("minimal_cut: region must be contiguous");
    if (sites.back() >= graph.num_sites)
        throw std::invalid_argument("minimal_cut: region site out of range");

    const int gaps = graph.num_sites + 1;
    const int nodes = (graph.layers + 1) * gaps;
    const int source = graph.layers * gaps + sites.front();
    const int target = graph.layers * gaps + sites.back() + 1;
    const int inf = std::numeric_limits<int>::max();
    std::vector<int> dist(nodes, inf);
    std::deque<int> queue;  // 0-1 BFS
    dist[source] = 0;
    queue.push_back(source);
    while (!queue.empty()) {
        const int node = queue.front();
        queue.pop_front();
        if (node == target) return dist[node];
        const int band = node / gaps;
        const int x = node % gaps;
        auto relax = [&](int next, int cost) {
            if (dist[node] + cost < dist[next]) {
                dist[next] = dist[node] + cost;
                if (cost == 0)
                    queue.push_front(next);
                else
                    queue.push_back(next);
            }
        };
        if (x > 0) relax(node - 1, leg_capacity(graph, band, x - 1));
        if (x < gaps - 1) relax(node + 1, leg_capacity(graph, band, x));
        if (band > 0 && gap_open(graph, band, x)) relax(node - gaps, 0);
        if (band < graph.layers && gap_open(graph, band + 1, x)) relax(node + gaps, 0);
    }
    return dist[target];  // unreachable only on malformed graphs
}

double percolation_entropy(int cut_legs, int d) {
    if (cut_legs < 0 || d < 2) throw std::invalid_argument("percolation_entropy: bad input");
    return static_cast<double>(cut_legs) * std::log(static_cast<double>(d));
}

namespace {

/// Crossing points of the normalized cut curves of consecutive sizes,
/// linearly interpolated on the p grid. means[s][k] is the mean cut of
/// sizes[s] at p_grid[k] divided by ln L: below the threshold the cut is
/// extensive (larger sizes sit higher), above it saturates (larger sizes sit
/// lower), and at the threshold the logarithmic growth makes the curves of
/// all sizes meet.
std::vector<double> curve_crossings(const std::vector<std::vector<double>>& means,
                                    const std::vector<double>& p_grid) {
    std::vector<double> crossings;
    for (std::size_t s = 0; s + 1 < means.size(); ++s) {
        for (std::size_t k = 0; k + 1 < p_grid.size(); ++k) {
            const double a = means[s][k] - means[s + 1][k];
            const double b = means[s][k + 1] - means[s + 1][k + 1];
            if (a == 0.0) {
                crossings.push_back(p_grid[k]);
                break;
            }
            if ((a > 0.0) != (b > 0.0)) {
                const double frac = a / (a - b);
                crossings.push_back(p_grid[k] + frac * (p_grid[k + 1] - p_grid[k]));
                break;
            }
        }
    }
    return crossings;
}

}  // namespace

PcEstimate estimate_pc(const std::vector<int>& sizes, const std::vector<double>& p_grid,
                       int samples_per_point, RandomStream stream, int workers) {
    if (sizes.size() < 2 || p_grid.size() < 2 || samples_per_point < 2)
        throw std::invalid_argument("estimate_pc: need >= 2 sizes, >= 2 p values, >= 2 samples");
    for (int length : sizes)
        if (length < 2) throw std::invalid_argument("estimate_pc: sizes must be >= 2");
    const std::size_t ns = sizes.size();
    const std::size_t np = p_grid.size();
    // raw[s][k][i]: minimal cut of sample i at (sizes[s], p_grid[k]).
    std::vector<std::vector<std::vector<int>>> raw(
        ns, std::vector<std::vector<int>>(np, std::vector<int>(samples_per_point, 0)));
    parallel_for(ns * np, workers, [&](std::size_t point) {
        const std::size_t s = point / np;
        const std::size_t k = point % np;
        const int length = sizes[s];
        CircuitSpec spec;
        spec.num_sites = length;
        spec.local_dim = 2;
        spec.depth = length;
        spec.meas_rate = p_grid[k];
        const Region half = Region::range(0, length / 2);
        for (int i = 0; i < samples_per_point; ++i) {
            spec.meas_seed = substream(stream, point, static_cast<std::uint64_t>(i));
            const CutGraph graph = build_cut_graph(spec, measurement_layout(spec));
            raw[s][k][i] = minimal_cut(graph, half);
        }
    });

    PcEstimate result;
    std::vector<std::vector<double>> means(ns, std::vector<double>(np, 0.0));
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t k = 0; k < np; ++k) {
            std::vector<double> vals(raw[s][k].begin(), raw[s][k].end());
            const MeanStdErr stat = mean_with_jackknife_se(vals);
            means[s][k] = stat.mean / std::log(static_cast<double>(sizes[s]));
            result.surface.push_back({sizes[s], p_grid[k], stat.mean, stat.std_error});
        }
    const std::vector<double> crossings = curve_crossings(means, p_grid);
    if (crossings.empty())
        throw std::runtime_error("estimate_pc: normalized cut curves never cross on the grid");
    double sum = 0.0;
    for (double c : crossings) sum += c;
    result.pc = sum / static_cast<double>(crossings.size());

    // Bootstrap over samples at every grid point.
    constexpr int kBootstrap = 200;
    Rng boot_rng(substream(stream, 0xb001, 0));
    std::vector<double> estimates;
    estimates.reserve(kBootstrap);
    std::vector<std::vector<double>> boot_means(ns, std::vector<double>(np, 0.0));
    for (int rep = 0; rep < kBootstrap; ++rep) {
        for (std::size_t s = 0; s < ns; ++s)
            for (std::size_t k = 0; k < np; ++k) {
                double total = 0.0;
                for (int i = 0; i < samples_per_point; ++i)
                    total += raw[s][k][boot_rng.uniform_int(samples_per_point)];
                boot_means[s][k] =
                    total / samples_per_point / std::log(static_cast<double>(sizes[s]));
            }
        const std::vector<double> boot_cross = curve_crossings(boot_means, p_grid);
        if (boot_cross.empty()) continue;
        double boot_sum = 0.0;
        for (double c : boot_cross) boot_sum += c;
        estimates.push_back(boot_sum / static_cast<double>(boot_cross.size()));
    }
    if (estimates.size() < 10) {
        result.ci_low = p_grid.front();
        result.ci_high = p_grid.back();
        return result;
    }
    std::sort(estimates.begin(), estimates.end());
    result.ci_low = estimates[static_cast<std::size_t>(0.025 * estimates.size())];
    result.ci_high = estimates[static_cast<std::size_t>(0.975 * (estimates.size() - 1))];
    return result;
}

}  // namespace mlab
