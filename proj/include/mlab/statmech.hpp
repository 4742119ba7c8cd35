#ifndef MLAB_STATMECH_HPP
#define MLAB_STATMECH_HPP

#include <optional>
#include <utility>
#include <vector>

#include "mlab/qstate.hpp"
#include "mlab/replica.hpp"

namespace mlab {

/// Signed log-magnitude representation of a partition function. sign == 0
/// encodes Z == 0 (log_abs is then meaningless).
struct LogZ {
    double log_abs = 0.0;
    int sign = 0;
};

double logz_to_double(const LogZ& z);

/// ln(Za / Zb); both values must be strictly positive.
double logz_log_ratio(const LogZ& za, const LogZ& zb);

/// Measurement-averaged link weight W_p(g,h) = (1-p) d^{C(g^{-1}h)} + p d.
double link_weight(const Permutation& g, const Permutation& h, int d, double p);

/// Fixed-measurement-configuration link weight: d when the link carries a
/// measurement, d^{C(g^{-1}h)} otherwise.
double fixed_config_link_weight(const Permutation& g, const Permutation& h, int d,
                                bool measured);

/// Down-triangle weight with the Weingarten spin integrated out:
/// J_p(g_i, g_j; g_k) = sum_l W_p(g_i^{-1} g_l) W_p(g_j^{-1} g_l) Wg_D(g_l^{-1} g_k),
/// D = d^2. The table must have been built with gram_dim = d^2.
double triangle_weight(const Permutation& g_i, const Permutation& g_j, const Permutation& g_k,
                       int d, double p, const WeingartenTable& weingarten);

/// d -> infinity factorized (Potts) triangle weight
/// ((1-p) delta_{g_i,g_k} + p)((1-p) delta_{g_j,g_k} + p).
double potts_triangle_weight(const Permutation& g_i, const Permutation& g_j,
                             const Permutation& g_k, double p);

enum class LatticeKind { honeycomb, square };

/// Replica lattice magnet of one brickwork circuit: width spin columns,
/// depth time steps (two brickwork layers each), measurement rounds after
/// every layer. The top boundary pins one permutation per site; the bottom
/// boundary is free (product initial state). When `measured` is set
/// (indexed [layer-1][site], layers 1..2*depth) the partition function is
/// evaluated at that fixed measurement configuration; otherwise each
/// measurement round is Bernoulli(meas_rate)-averaged into the link weights.
struct LatticeModel {
    int q = 2;
    int local_dim = 2;
    double meas_rate = 0.0;
    int width = 0;
    int depth = 0;
    LatticeKind kind = LatticeKind::honeycomb;
    std::vector<Permutation> top_boundary;
    std::optional<std::vector<std::vector<bool>>> measured;
};

/// Top boundary for Renyi/replica moments: the n-cycle^k boundary permutation
/// on region A, identity elsewhere. Requires n*k <= q.
std::vector<Permutation> make_top_boundary(int q, int width, const Region& region_a, int n,
                                           int k);

/// Exact log partition function of a honeycomb-kind LatticeModel by a
/// time-ordered transfer contraction over gate spins. Partial sums can be
/// negative (Weingarten weights are), hence the signed result.
LogZ contract(const LatticeModel& model);

/// Generic finite graph for the Potts / Fortuin-Kasteleyn checks.
struct BondGraph {
    int num_sites = 0;
    std::vector<std::pair<int, int>> links;
};

/// w x h grid with nearest-neighbor links.
BondGraph grid_graph(int w, int h);

/// ln Z of the FK cluster expansion
/// Z = sum_{subsets} p^{#empty} (1-p)^{#occupied} (q!)^{#clusters}.
/// Exhaustive over 2^{#links} subsets; requires #links <= 24.
double fk_log_partition_function(const BondGraph& graph, double p, int q);

/// ln Z of the q! state Potts spin sum with bond weight (1-p) delta + p.
/// Exhaustive over (q!)^{num_sites} configurations (test-scale oracle).
double potts_log_partition_function(const BondGraph& graph, double p, int q);

/// ln(Z_A / Z_0) for the square-lattice Ising magnet of the random tensor
/// network: 2*depth bulk rows of `width` spins under a pinned top row (swap
/// on region A for Z_A, all identity for Z_0), free bottom, link weight
/// d^{C(relative permutation)} on every lattice link.
double rtn_ising_log_ratio(int d, int width, int depth, const Region& region_a);

}  // namespace mlab

#endif
