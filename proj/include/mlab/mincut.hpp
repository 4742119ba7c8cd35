#ifndef MLAB_MINCUT_HPP
#define MLAB_MINCUT_HPP

#include <vector>

#include "mlab/circuit.hpp"
#include "mlab/qstate.hpp"
#include "mlab/random.hpp"

namespace mlab {

/// The circuit seen as a planar tensor network for minimal-cut purposes.
/// Legs are the vertical wire segments: band b, site x is the segment of
/// site x's wire between layer b and layer b+1 (band 0 holds the initial
/// legs, band `layers` the top legs read by the entropy region). A leg has
/// capacity 1 unless it is measured, or is an initial leg of a product state
/// (capacity 0, so cuts may exit through the bottom for free). Setting
/// pinned_bottom gives initial legs capacity 1 instead.
struct CutGraph {
    int num_sites = 0;
    int layers = 0;
    /// measured[band][site], band in 0..layers.
    std::vector<std::vector<bool>> measured;
    bool pinned_bottom = false;

    int leg_count() const { return num_sites * (layers + 1); }
};

/// Build the cut graph of a circuit realization with the given frozen
/// measurement positions ((layer, site) pairs, layers 1..2*depth).
CutGraph build_cut_graph(const CircuitSpec& spec,
                         const std::vector<std::pair<int, int>>& layout);

/// Fewest unmeasured legs a cut separating region A's top legs from the rest
/// of the top boundary must cross. A must be contiguous. Computed as a 0-1
/// shortest path between the two dual boundary gaps of A; side and (free)
/// bottom corridors are part of the dual graph, so cuts that exit sideways
/// or through the initial state are found automatically.
int minimal_cut(const CutGraph& graph, const Region& region_a);

/// Fixed-configuration entanglement d -> infinity: cut length times ln d.
double percolation_entropy(int cut_legs, int d);

struct PcSurfacePoint {
    int num_sites = 0;
    double p = 0.0;
    double mean_cut = 0.0;
    double std_error = 0.0;
};

struct PcEstimate {
    double pc = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::vector<PcSurfacePoint> surface;
};

/// Finite-size crossing estimate of the percolation threshold: for each
/// chain size L (depth L, region A = left half) and each p on the grid, the
/// mean minimal cut over `samples_per_point` random measurement layouts is
/// recorded. Curves of mean cut / ln L order one way below the threshold
/// (extensive cut) and the other way above it (saturated cut); pc is the
/// average p at which consecutive sizes cross, with a bootstrap confidence
/// interval.
PcEstimate estimate_pc(const std::vector<int>& sizes, const std::vector<double>& p_grid,
                       int samples_per_point, RandomStream stream, int workers = 1);

}  // namespace mlab

#endif
