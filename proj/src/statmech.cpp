#include "mlab/statmech.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mlab {

namespace {

constexpr std::size_t kStateCap = std::size_t(1) << 24;

std::size_t int_pow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

/// Sum out one slot digit (base f) at the given position.
void marginalize_slot(std::vector<double>& amps, int pos, int f) {
    const std::size_t stride = int_pow(static_cast<std::size_t>(f), pos);
    const std::size_t new_size = amps.size() / static_cast<std::size_t>(f);
    const std::size_t outer = new_size / stride;
    std::vector<double> next(new_size, 0.0);
    for (std::size_t hi = 0; hi < outer; ++hi)
        for (int dig = 0; dig < f; ++dig) {
            const std::size_t src = (hi * static_cast<std::size_t>(f) + dig) * stride;
            const std::size_t dst = hi * stride;
            for (std::size_t lo = 0; lo < stride; ++lo) next[dst + lo] += amps[src + lo];
        }
    amps.swap(next);
}

}  // namespace

double logz_to_double(const LogZ& z) {
    if (z.sign == 0) return 0.0;
    return static_cast<double>(z.sign) * std::exp(z.log_abs);
}

double logz_log_ratio(const LogZ& za, const LogZ& zb) {
    if (za.sign != 1 || zb.sign != 1)
        throw std::invalid_argument("logz_log_ratio: both partition functions must be positive");
    return za.log_abs - zb.log_abs;
}

double link_weight(const Permutation& g, const Permutation& h, int d, double p) {
    if (d < 2) throw std::invalid_argument("link_weight: d < 2");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("link_weight: p outside [0,1]");
    return (1.0 - p) * perm_overlap(g, h, d) + p * static_cast<double>(d);
}

double fixed_config_link_weight(const Permutation& g, const Permutation& h, int d,
                                bool measured) {
    if (d < 2) throw std::invalid_argument("fixed_config_link_weight: d < 2");
    if (measured) return static_cast<double>(d);
    return perm_overlap(g, h, d);
}

double triangle_weight(const Permutation& g_i, const Permutation& g_j, const Permutation& g_k,
                       int d, double p, const WeingartenTable& weingarten) {
    if (weingarten.gram_dim() != d * d)
        throw std::invalid_argument("triangle_weight: table must use gram_dim = d^2");
    double sum = 0.0;
    for (const Permutation& g_l : symmetric_group(g_i.q()))
        sum += link_weight(g_i, g_l, d, p) * link_weight(g_j, g_l, d, p) *
               weingarten.value(g_l.inverse().compose(g_k));
    return sum;
}

double potts_triangle_weight(const Permutation& g_i, const Permutation& g_j,
                             const Permutation& g_k, double p) {
    double a = (g_i == g_k ? 1.0 - p : 0.0) + p;
    double b = (g_j == g_k ? 1.0 - p : 0.0) + p;
    return a * b;
}

std::vector<Permutation> make_top_boundary(int q, int width, const Region& region_a, int n,
                                           int k) {
    if (!region_a.sites().empty() && region_a.sites().back() >= width)
        throw std::invalid_argument("make_top_boundary: region exceeds width");
    const Permutation swap = Permutation::swap_boundary(q, n, k);
    const Permutation e = Permutation::identity(q);
    std::vector<Permutation> boundary;
    boundary.reserve(width);
    for (int x = 0; x < width; ++x) boundary.push_back(region_a.contains(x) ? swap : e);
    return boundary;
}

LogZ contract(const LatticeModel& model) {
    if (model.kind != LatticeKind::honeycomb)
        throw std::invalid_argument(
            "contract: square-lattice models are handled by rtn_ising_log_ratio");
    if (model.width < 1 || model.depth < 0)
        throw std::invalid_argument("contract: bad geometry");
    if (model.local_dim < 2) throw std::invalid_argument("contract: local_dim < 2");
    if (static_cast<int>(model.top_boundary.size()) != model.width)
        throw std::invalid_argument("contract: top boundary length != width");
    const int layers = 2 * model.depth;
    if (model.measured) {
        if (static_cast<int>(model.measured->size()) != layers)
            throw std::invalid_argument("contract: measured config needs one row per layer");
        for (const auto& row : *model.measured)
            if (static_cast<int>(row.size()) != model.width)
                throw std::invalid_argument("contract: measured config row length != width");
    }
    const int q = model.q;
    const int d = model.local_dim;
    const double p = model.meas_rate;
    const auto group = symmetric_group(q);
    const int f = static_cast<int>(group.size());
    if (static_cast<std::size_t>(f) * f * f > (std::size_t(1) << 28))
        throw std::invalid_argument("contract: state-space cap exceeded (Q too large)");
    for (const auto& g : model.top_boundary)
        if (g.q() != q) throw std::invalid_argument("contract: boundary permutation has wrong Q");

    WeingartenTable wg_table(q, d * d);
    // relc[a*f+b] = C(g_a^{-1} g_b); wg[a*f+b] = Wg_{d^2}(g_a^{-1} g_b).
    std::vector<int> relc(static_cast<std::size_t>(f) * f);
    std::vector<double> wg(static_cast<std::size_t>(f) * f);
    for (int a = 0; a < f; ++a) {
        const Permutation inv_a = group[a].inverse();
        for (int b = 0; b < f; ++b) {
            const Permutation rel = inv_a.compose(group[b]);
            relc[static_cast<std::size_t>(a) * f + b] = rel.cycle_count();
            wg[static_cast<std::size_t>(a) * f + b] = wg_table.value_by_rank(permutation_rank(rel));
        }
    }
    std::vector<int> bnd(model.width);
    for (int x = 0; x < model.width; ++x)
        bnd[x] = static_cast<int>(permutation_rank(model.top_boundary[x]));

    // Wire-segment weight as a function of the relative cycle count, for the
    // measurement rounds after layers first_round..last_round.
    auto seg_weights = [&](int site, int first_round, int last_round) {
        std::vector<double> w(static_cast<std::size_t>(q) + 1, 0.0);
        bool measured_any = false;
        double keep = 1.0;
        if (model.measured) {
            for (int r = first_round; r <= last_round; ++r)
                if ((*model.measured)[r - 1][site]) measured_any = true;
        } else {
            keep = std::pow(1.0 - p, last_round - first_round + 1);
        }
        for (int c = 1; c <= q; ++c) {
            double unmeasured = std::pow(static_cast<double>(d), c);
            if (model.measured)
                w[c] = measured_any ? static_cast<double>(d) : unmeasured;
            else
                w[c] = keep * unmeasured + (1.0 - keep) * static_cast<double>(d);
        }
        return w;
    };

    // Transfer state over the out-spins of gates still visible from the
    // frontier. Each active spin is a base-f digit ("slot"); the two sites a
    // gate acts on share its slot; slots no one references anymore are summed
    // out immediately, which keeps the digit count near width/2.
    std::vector<double> amps{1.0};
    std::vector<int> slot_refs;
    std::vector<int> site_slot(model.width, -1);  // -1: still the initial product state
    std::vector<int> site_layer(model.width, 0);
    double log_scale = 0.0;

    auto slot_stride = [&](int pos) { return int_pow(static_cast<std::size_t>(f), pos); };

    for (int layer = 1; layer <= layers; ++layer) {
        const int offset = (layer - 1) % 2;
        for (int left = offset; left + 1 < model.width; left += 2) {
            const int right = left + 1;
            const int pa = site_slot[left];
            const int pb = site_slot[right];
            const bool ia = pa < 0;
            const bool ib = pb < 0;
            std::vector<double> wa, wb;
            if (!ia) wa = seg_weights(left, site_layer[left], layer - 1);
            if (!ib) wb = seg_weights(right, site_layer[right], layer - 1);

            // Gate tensor with the Weingarten spin h summed out:
            // T(a, b, g) = sum_h V_left(a,h) V_right(b,h) Wg_{d^2}(h^{-1} g).
            // Legs still attached to the initial state contribute 1 per h.
            const int na = ia ? 1 : f;
            const int nb = ib ? 1 : f;
            std::vector<double> tensor(static_cast<std::size_t>(na) * nb * f, 0.0);
            for (int a = 0; a < na; ++a)
                for (int b = 0; b < nb; ++b) {
                    double* row = tensor.data() + (static_cast<std::size_t>(a) * nb + b) * f;
                    for (int h = 0; h < f; ++h) {
                        double v = 1.0;
                        if (!ia) v *= wa[relc[static_cast<std::size_t>(a) * f + h]];
                        if (!ib) v *= wb[relc[static_cast<std::size_t>(b) * f + h]];
                        const double* wg_row = wg.data() + static_cast<std::size_t>(h) * f;
                        for (int g = 0; g < f; ++g) row[g] += v * wg_row[g];
                    }
                }

            const std::size_t old_size = amps.size();
            if (old_size * static_cast<std::size_t>(f) > kStateCap)
                throw std::invalid_argument("contract: state-space cap exceeded");
            const std::size_t sa = ia ? 1 : slot_stride(pa);
            const std::size_t sb = ib ? 1 : slot_stride(pb);
            std::vector<double> next(old_size * static_cast<std::size_t>(f), 0.0);
            for (std::size_t c = 0; c < old_size; ++c) {
                const double amp = amps[c];
                if (amp == 0.0) continue;
                const int a = ia ? 0 : static_cast<int>((c / sa) % f);
                const int b = ib ? 0 : static_cast<int>((c / sb) % f);
                const double* row = tensor.data() + (static_cast<std::size_t>(a) * nb + b) * f;
                for (int g = 0; g < f; ++g)
                    next[static_cast<std::size_t>(g) * old_size + c] = amp * row[g];
            }
            amps.swap(next);

            const int new_pos = static_cast<int>(slot_refs.size());
            slot_refs.push_back(2);
            if (!ia) --slot_refs[pa];
            if (!ib) --slot_refs[pb];
            site_slot[left] = site_slot[right] = new_pos;
            site_layer[left] = site_layer[right] = layer;
            for (int pos = static_cast<int>(slot_refs.size()) - 1; pos >= 0; --pos) {
                if (slot_refs[pos] != 0) continue;
                marginalize_slot(amps, pos, f);
                slot_refs.erase(slot_refs.begin() + pos);
                for (int x = 0; x < model.width; ++x)
                    if (site_slot[x] > pos) --site_slot[x];
            }

            double peak = 0.0;
            for (double v : amps) peak = std::max(peak, std::fabs(v));
            if (peak == 0.0) return {0.0, 0};
            for (double& v : amps) v /= peak;
            log_scale += std::log(peak);
        }
    }

    // Top boundary: each site's last wire segment (including the measurement
    // rounds it still has to pass) contracts with the pinned permutation.
    // Sites never touched by a gate contract the initial state with the
    // boundary directly, which gives weight 1 for any pinning.
    for (int x = 0; x < model.width; ++x) {
        if (site_slot[x] < 0) continue;
        const std::vector<double> w = seg_weights(x, site_layer[x], layers);
        const std::size_t stride = slot_stride(site_slot[x]);
        for (std::size_t c = 0; c < amps.size(); ++c) {
            const int a = static_cast<int>((c / stride) % f);
            amps[c] *= w[relc[static_cast<std::size_t>(a) * f + bnd[x]]];
        }
    }
    double total = 0.0;
    for (double v : amps) total += v;
    if (total == 0.0) return {0.0, 0};
    return {std::log(std::fabs(total)) + log_scale, total > 0.0 ? 1 : -1};
}

BondGraph grid_graph(int w, int h) {
    if (w < 1 || h < 1) throw std::invalid_argument("grid_graph: bad size");
    BondGraph graph;
    graph.num_sites = w * h;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            int s = y * w + x;
            if (x + 1 < w) graph.links.emplace_back(s, s + 1);
            if (y + 1 < h) graph.links.emplace_back(s, s + w);
        }
    return graph;
}

namespace {

std::size_t factorial(int n) {
    std::size_t r = 1;
    for (int i = 2; i <= n; ++i) r *= static_cast<std::size_t>(i);
    return r;
}

int find_root(std::vector<int>& parent, int x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

}  // namespace

double fk_log_partition_function(const BondGraph& graph, double p, int q) {
    const int m = static_cast<int>(graph.links.size());
    if (m > 24) throw std::invalid_argument("fk_log_partition_function: more than 24 links");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("fk_log_partition_function: bad p");
    const long double qf = static_cast<long double>(factorial(q));
    long double z = 0.0L;
    std::vector<int> parent(graph.num_sites);
    for (std::size_t mask = 0; mask < (std::size_t(1) << m); ++mask) {
        std::iota(parent.begin(), parent.end(), 0);
        int occupied = 0;
        for (int l = 0; l < m; ++l) {
            if (!(mask >> l & 1)) continue;
            ++occupied;
            int a = find_root(parent, graph.links[l].first);
            int b = find_root(parent, graph.links[l].second);
            if (a != b) parent[a] = b;
        }
        int clusters = 0;
        for (int s = 0; s < graph.num_sites; ++s)
            if (find_root(parent, s) == s) ++clusters;
        z += std::pow(static_cast<long double>(p), m - occupied) *
             std::pow(static_cast<long double>(1.0 - p), occupied) * std::pow(qf, clusters);
    }
    return static_cast<double>(std::log(z));
}

double potts_log_partition_function(const BondGraph& graph, double p, int q) {
    const std::size_t states = factorial(q);
    double log_configs = static_cast<double>(graph.num_sites) *
                         std::log(static_cast<double>(states));
    if (log_configs > 26.0 * std::log(2.0))
        throw std::invalid_argument("potts_log_partition_function: configuration cap exceeded");
    std::vector<int> spin(graph.num_sites, 0);
    long double z = 0.0L;
    for (;;) {
        long double w = 1.0L;
        for (const auto& [a, b] : graph.links)
            w *= (spin[a] == spin[b] ? 1.0L - p : 0.0L) + static_cast<long double>(p);
        z += w;
        int pos = graph.num_sites - 1;
        while (pos >= 0 && ++spin[pos] == static_cast<int>(states)) spin[pos--] = 0;
        if (pos < 0) break;
    }
    return static_cast<double>(std::log(z));
}

namespace {

double rtn_log_z(int d, int width, int depth, const std::vector<int>& top) {
    const std::size_t size = std::size_t(1) << width;
    const int rows = 2 * depth;
    const double same = static_cast<double>(d) * d;  // aligned: two cycles
    const double diff = static_cast<double>(d);      // misaligned: one cycle
    // Horizontal (within-row) weight per spin configuration.
    std::vector<double> hweight(size, 1.0);
    for (std::size_t s = 0; s < size; ++s) {
        double w = 1.0;
        for (int x = 0; x + 1 < width; ++x)
            w *= ((s >> x & 1) == (s >> (x + 1) & 1)) ? same : diff;
        hweight[s] = w;
    }
    std::vector<double> v(size, 0.0);
    std::size_t pinned = 0;
    for (int x = 0; x < width; ++x)
        if (top[x]) pinned |= std::size_t(1) << x;
    v[pinned] = 1.0;
    double log_scale = 0.0;
    for (int r = 0; r < rows; ++r) {
        // Vertical links: independent 2x2 transfer per column.
        for (int x = 0; x < width; ++x) {
            const std::size_t bit = std::size_t(1) << x;
            for (std::size_t s = 0; s < size; ++s) {
                if (s & bit) continue;
                const double a = v[s];
                const double b = v[s | bit];
                v[s] = same * a + diff * b;
                v[s | bit] = diff * a + same * b;
            }
        }
        double peak = 0.0;
        for (std::size_t s = 0; s < size; ++s) {
            v[s] *= hweight[s];
            peak = std::max(peak, v[s]);
        }
        for (double& x : v) x /= peak;
        log_scale += std::log(peak);
    }
    double total = 0.0;
    for (double x : v) total += x;
    return std::log(total) + log_scale;
}

}  // namespace

double rtn_ising_log_ratio(int d, int width, int depth, const Region& region_a) {
    if (d < 2) throw std::invalid_argument("rtn_ising_log_ratio: d < 2");
    if (width < 1 || width > 24 || depth < 0)
        throw std::invalid_argument("rtn_ising_log_ratio: geometry cap exceeded");
    if (!region_a.sites().empty() && region_a.sites().back() >= width)
        throw std::invalid_argument("rtn_ising_log_ratio: region exceeds width");
    std::vector<int> top_a(width, 0), top_0(width, 0);
    for (int s : region_a.sites()) top_a[s] = 1;
    if (region_a.size() == 0) return 0.0;
    return rtn_log_z(d, width, depth, top_a) - rtn_log_z(d, width, depth, top_0);
}

}  // namespace mlab
