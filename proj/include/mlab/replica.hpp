#ifndef MLAB_REPLICA_HPP
#define MLAB_REPLICA_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace mlab {

/// Element of the symmetric group S_Q in one-line notation, 2 <= Q <= 6.
/// These are the "spins" of the replica statistical-mechanics model.
class Permutation {
  public:
    explicit Permutation(std::vector<int> images);

    static Permutation identity(int q);

    /// The cycle (0 1 ... n-1) padded with fixed points up to q.
    static Permutation full_cycle(int q, int n);

    /// Boundary permutation (1 2 ... n)^{(x) k}: k independent n-cycles on
    /// the first n*k points of S_q, identity on the rest. Requires n*k <= q.
    static Permutation swap_boundary(int q, int n, int k);

    int q() const { return static_cast<int>(images_.size()); }
    int operator()(int x) const { return images_[x]; }
    const std::vector<int>& images() const { return images_; }

    /// (this * other)(x) = this(other(x)).
    Permutation compose(const Permutation& other) const;
    Permutation inverse() const;

    /// Number of cycles, fixed points included. C(e) = q, and C is maximal
    /// only at the identity.
    int cycle_count() const;

    bool is_identity() const;
    bool operator==(const Permutation& other) const { return images_ == other.images_; }
    bool operator!=(const Permutation& other) const { return !(*this == other); }

  private:
    std::vector<int> images_;
};

/// All q! elements of S_q in a fixed (lexicographic) order. Index 0 is the
/// identity.
std::vector<Permutation> symmetric_group(int q);

/// Index of g within symmetric_group(g.q()) without materializing the list
/// (Lehmer code ranking).
std::size_t permutation_rank(const Permutation& g);

/// Overlap of permutation states <g|h> = d^{C(g^{-1} h)}.
double perm_overlap(const Permutation& g, const Permutation& h, int local_dim);

/// Weingarten functions Wg_D(g) for S_Q, obtained by inverting the Gram
/// matrix M_{gh} = D^{C(g^{-1}h)} and class-averaging the result. Satisfies
/// sum_h Wg_D(g^{-1}h) D^{C(h)} = [g == e].
class WeingartenTable {
  public:
    WeingartenTable(int q, int gram_dim);

    int q() const { return q_; }
    int gram_dim() const { return gram_dim_; }

    double value(const Permutation& g) const;
    double value_by_rank(std::size_t rank) const { return values_[rank]; }

  private:
    int q_;
    int gram_dim_;
    std::vector<double> values_;  // indexed by permutation rank
};

/// Explicit permutation state |g> in the Q-fold doubled space (C^D (x) C^D)^Q,
/// component ordering (i_1, j_1, ..., i_Q, j_Q) row-major: entry 1 iff
/// j_r = i_{g(r)} for all r. Test-scale helper; production code works with
/// overlap formulas instead.
Eigen::VectorXd permutation_state_vector(const Permutation& g, int dim);

/// The exact Haar moment operator E_U (U (x) U*)^{(x) Q} on C^{D^{2Q}},
/// assembled from Weingarten coefficients and permutation states. Idempotent,
/// and fixes every |g>.
Eigen::MatrixXd haar_moment_projector(int q, int dim);

}  // namespace mlab

#endif
