#ifndef MLAB_QSTATE_HPP
#define MLAB_QSTATE_HPP

#include <Eigen/Dense>
#include <vector>

#include "mlab/random.hpp"

namespace mlab {

/// Ordered set of site indices identifying a subsystem.
class Region {
  public:
    explicit Region(std::vector<int> sites);
    static Region range(int first, int past_last);

    const std::vector<int>& sites() const { return sites_; }
    int size() const { return static_cast<int>(sites_.size()); }
    bool contains(int site) const;

    /// Sites in {0..num_sites-1} not in this region.
    Region complement(int num_sites) const;

  private:
    std::vector<int> sites_;
};

/// Dense state vector of a chain of qudits, site 0 being the most significant
/// digit of the basis index. The amplitude vector stays unit-normalized at
/// all times; the Born probability of the trajectory accumulates in
/// log_weight (natural log), which avoids underflow over long monitored runs.
class QuditState {
  public:
    QuditState(int num_sites, int local_dim);

    static QuditState product_state(int num_sites, int local_dim,
                                    const std::vector<int>& basis);

    /// State given by an explicit amplitude vector (normalized on entry or
    /// normalized here; must be nonzero).
    static QuditState from_amplitudes(int num_sites, int local_dim,
                                      Eigen::VectorXcd amplitudes);

    int num_sites() const { return num_sites_; }
    int local_dim() const { return local_dim_; }
    double log_weight() const { return log_weight_; }
    bool dead_branch() const { return dead_; }
    const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
    Eigen::VectorXcd& mutable_amplitudes() { return amplitudes_; }

    /// Apply a d^2 x d^2 unitary to sites (left_site, left_site+1), in place
    /// over strided slices. The gate row/column index is s_left * d + s_right.
    void apply_two_site_gate(const Eigen::MatrixXcd& gate, int left_site);

    /// Same, without the unitarity check (trusted callers on hot paths).
    void apply_two_site_gate_unchecked(const Eigen::MatrixXcd& gate, int left_site);

    /// Born probabilities of the d outcomes at a site; sums to 1.
    std::vector<double> outcome_probabilities(int site) const;

    /// Projective measurement. Samples the outcome with its Born probability,
    /// projects, renormalizes and adds ln(p) to log_weight.
    int measure_site(int site, Rng& rng);

    /// Imposed-outcome variant. Returns false (and marks the state as a dead
    /// branch) when the outcome probability is below 1e-300.
    bool measure_site_forced(int site, int outcome);

    /// rho_A = tr_{complement} |psi><psi| of the *normalized* state.
    Eigen::MatrixXcd reduced_density_matrix(const Region& region) const;

    /// Renyi entropy in nats; n == 1 gives the von Neumann entropy, n == 0
    /// the log of the rank (eigenvalues above the clamp).
    double renyi_entropy(const Region& region, int n) const;

    /// tr rho_A^2, computed without an eigendecomposition.
    double purity(const Region& region) const;

  private:
    void project(int site, int outcome, double prob);
    Eigen::MatrixXcd amplitude_matrix(const Region& region) const;

    int num_sites_;
    int local_dim_;
    Eigen::VectorXcd amplitudes_;
    double log_weight_ = 0.0;
    bool dead_ = false;
};

}  // namespace mlab

#endif
