#include "mlab/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlab {

namespace {

constexpr double kUnitaryTol = 1e-10;
constexpr double kDeadBranchProb = 1e-300;
constexpr double kEigenvalueClamp = 1e-14;
constexpr Eigen::Index kRegionCap = 4096;  // largest d^{|A|} we will materialize

Eigen::Index int_pow(int base, int exp) {
    Eigen::Index r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

Region::Region(std::vector<int> sites) : sites_(std::move(sites)) {
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        if (sites_[i] < 0) throw std::invalid_argument("Region: negative site index");
        if (i > 0 && sites_[i] <= sites_[i - 1])
            throw std::invalid_argument("Region: sites must be strictly increasing");
    }
}

Region Region::range(int first, int past_last) {
    if (first > past_last) throw std::invalid_argument("Region::range: first > past_last");
    std::vector<int> s;
    s.reserve(past_last - first);
    for (int i = first; i < past_last; ++i) s.push_back(i);
    return Region(std::move(s));
}

bool Region::contains(int site) const {
    return std::binary_search(sites_.begin(), sites_.end(), site);
}

Region Region::complement(int num_sites) const {
    std::vector<int> s;
    for (int i = 0; i < num_sites; ++i)
        if (!contains(i)) s.push_back(i);
    return Region(std::move(s));
}

QuditState::QuditState(int num_sites, int local_dim)
    : num_sites_(num_sites), local_dim_(local_dim) {
    if (num_sites < 1) throw std::invalid_argument("QuditState: need at least one site");
    if (local_dim < 2) throw std::invalid_argument("QuditState: local_dim must be >= 2");
    amplitudes_ = Eigen::VectorXcd::Zero(int_pow(local_dim, num_sites));
    amplitudes_(0) = 1.0;
}

QuditState QuditState::product_state(int num_sites, int local_dim,
                                     const std::vector<int>& basis) {
    if (static_cast<int>(basis.size()) != num_sites)
        throw std::invalid_argument("product_state: basis length != num_sites");
    QuditState state(num_sites, local_dim);
    Eigen::Index idx = 0;
    for (int b : basis) {
        if (b < 0 || b >= local_dim)
            throw std::invalid_argument("product_state: basis index out of range");
        idx = idx * local_dim + b;
    }
    state.amplitudes_.setZero();
    state.amplitudes_(idx) = 1.0;
    return state;
}

QuditState QuditState::from_amplitudes(int num_sites, int local_dim,
                                       Eigen::VectorXcd amplitudes) {
    QuditState state(num_sites, local_dim);
    if (amplitudes.size() != state.amplitudes_.size())
        throw std::invalid_argument("from_amplitudes: wrong vector length");
    double norm = amplitudes.norm();
    if (norm <= 0.0) throw std::invalid_argument("from_amplitudes: zero vector");
    state.amplitudes_ = amplitudes / norm;
    return state;
}

void QuditState::apply_two_site_gate(const Eigen::MatrixXcd& gate, int left_site) {
    const Eigen::Index d2 = static_cast<Eigen::Index>(local_dim_) * local_dim_;
    if (gate.rows() != d2 || gate.cols() != d2)
        throw std::invalid_argument("apply_two_site_gate: gate dimension mismatch");
    if ((gate.adjoint() * gate - Eigen::MatrixXcd::Identity(d2, d2)).cwiseAbs().maxCoeff() >
        kUnitaryTol)
        throw std::invalid_argument("apply_two_site_gate: gate is not unitary");
    apply_two_site_gate_unchecked(gate, left_site);
}

void QuditState::apply_two_site_gate_unchecked(const Eigen::MatrixXcd& gate, int left_site) {
    if (left_site < 0 || left_site + 1 >= num_sites_)
        throw std::invalid_argument("apply_two_site_gate: site out of range");
    const Eigen::Index d2 = static_cast<Eigen::Index>(local_dim_) * local_dim_;
    const Eigen::Index block = int_pow(local_dim_, num_sites_ - left_site - 2);
    const Eigen::Index outer = int_pow(local_dim_, left_site);

    if (block == 1) {
        // Pair index is the fastest digit: the whole vector is a (d^2 x outer)
        // matrix with contiguous columns.
        Eigen::Map<Eigen::MatrixXcd> m(amplitudes_.data(), d2, outer);
        m = gate * m;
        return;
    }
    // Each outer chunk is a (block x d^2) matrix with contiguous columns
    // indexed by the gate pair; the gate acts as a right-multiplication.
    static thread_local Eigen::MatrixXcd scratch;
    scratch.resize(block, d2);
    const Eigen::MatrixXcd gate_t = gate.transpose();
    for (Eigen::Index a = 0; a < outer; ++a) {
        Eigen::Map<Eigen::MatrixXcd> m(amplitudes_.data() + a * d2 * block, block, d2);
        scratch.noalias() = m * gate_t;
        m = scratch;
    }
}

std::vector<double> QuditState::outcome_probabilities(int site) const {
    if (site < 0 || site >= num_sites_)
        throw std::invalid_argument("outcome_probabilities: site out of range");
    const Eigen::Index stride = int_pow(local_dim_, num_sites_ - site - 1);
    const Eigen::Index outer = int_pow(local_dim_, site);
    std::vector<double> probs(local_dim_, 0.0);
    for (Eigen::Index a = 0; a < outer; ++a)
        for (int o = 0; o < local_dim_; ++o) {
            const Eigen::Index base = (a * local_dim_ + o) * stride;
            probs[o] += amplitudes_.segment(base, stride).squaredNorm();
        }
    return probs;
}

void QuditState::project(int site, int outcome, double prob) {
    const Eigen::Index stride = int_pow(local_dim_, num_sites_ - site - 1);
    const Eigen::Index outer = int_pow(local_dim_, site);
    const double scale = 1.0 / std::sqrt(prob);
    for (Eigen::Index a = 0; a < outer; ++a)
        for (int o = 0; o < local_dim_; ++o) {
            const Eigen::Index base = (a * local_dim_ + o) * stride;
            if (o == outcome)
                amplitudes_.segment(base, stride) *= scale;
            else
                amplitudes_.segment(base, stride).setZero();
        }
    log_weight_ += std::log(prob);
}

int QuditState::measure_site(int site, Rng& rng) {
    std::vector<double> probs = outcome_probabilities(site);
    double total = 0.0;
    for (double p : probs) total += p;
    if (total < kDeadBranchProb)
        throw std::runtime_error("measure_site: all outcome probabilities vanish");
    int outcome = static_cast<int>(rng.discrete(probs));
    project(site, outcome, probs[outcome]);
    return outcome;
}

bool QuditState::measure_site_forced(int site, int outcome) {
    if (outcome < 0 || outcome >= local_dim_)
        throw std::invalid_argument("measure_site_forced: outcome out of range");
    std::vector<double> probs = outcome_probabilities(site);
    if (probs[outcome] < kDeadBranchProb) {
        dead_ = true;
        return false;
    }
    project(site, outcome, probs[outcome]);
    return true;
}

Eigen::MatrixXcd QuditState::amplitude_matrix(const Region& region) const {
    const int na = region.size();
    const Eigen::Index dim_a = int_pow(local_dim_, na);
    const Eigen::Index dim_e = amplitudes_.size() / dim_a;
    Eigen::MatrixXcd m(dim_a, dim_e);
    std::vector<Eigen::Index> site_stride(num_sites_);
    for (int s = 0; s < num_sites_; ++s)
        site_stride[s] = int_pow(local_dim_, num_sites_ - s - 1);
    std::vector<Eigen::Index> a_stride(num_sites_, 0), e_stride(num_sites_, 0);
    {
        Eigen::Index sa = dim_a, se = dim_e;
        for (int s = 0; s < num_sites_; ++s) {
            if (region.contains(s)) {
                sa /= local_dim_;
                a_stride[s] = sa;
            } else {
                se /= local_dim_;
                e_stride[s] = se;
            }
        }
    }
    for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
        Eigen::Index a = 0, e = 0;
        for (int s = 0; s < num_sites_; ++s) {
            int digit = static_cast<int>((i / site_stride[s]) % local_dim_);
            a += digit * a_stride[s];
            e += digit * e_stride[s];
        }
        m(a, e) = amplitudes_(i);
    }
    return m;
}

Eigen::MatrixXcd QuditState::reduced_density_matrix(const Region& region) const {
    if (!region.sites().empty() && region.sites().back() >= num_sites_)
        throw std::invalid_argument("reduced_density_matrix: region site out of range");
    if (int_pow(local_dim_, region.size()) > kRegionCap)
        throw std::invalid_argument("reduced_density_matrix: region too large");
    Eigen::MatrixXcd m = amplitude_matrix(region);
    Eigen::MatrixXcd rho(m.rows(), m.rows());
    rho.noalias() = m * m.adjoint();
    return rho;
}

double QuditState::renyi_entropy(const Region& region, int n) const {
    if (n < 0) throw std::invalid_argument("renyi_entropy: negative index");
    Eigen::MatrixXcd rho = reduced_density_matrix(region);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
    Eigen::VectorXd eig = solver.eigenvalues();
    double result = 0.0;
    if (n == 1) {
        for (Eigen::Index i = 0; i < eig.size(); ++i) {
            double lam = eig(i) < kEigenvalueClamp ? 0.0 : eig(i);
            if (lam > 0.0) result -= lam * std::log(lam);
        }
        return result;
    }
    if (n == 0) {
        int rank = 0;
        for (Eigen::Index i = 0; i < eig.size(); ++i)
            if (eig(i) >= kEigenvalueClamp) ++rank;
        return std::log(static_cast<double>(std::max(rank, 1)));
    }
    double trace_n = 0.0;
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
        double lam = eig(i) < kEigenvalueClamp ? 0.0 : eig(i);
        trace_n += std::pow(lam, n);
    }
    return std::log(trace_n) / (1.0 - n);
}

double QuditState::purity(const Region& region) const {
    if (!region.sites().empty() && region.sites().back() >= num_sites_)
        throw std::invalid_argument("purity: region site out of range");
    if (int_pow(local_dim_, region.size()) > kRegionCap)
        throw std::invalid_argument("purity: region too large");
    const auto& sites = region.sites();
    const bool contiguous_prefix =
        !sites.empty() && sites.front() == 0 && sites.back() == region.size() - 1;
    if (contiguous_prefix) {
        // Basis index factorizes as a * dim_e + e; no gather pass needed.
        const Eigen::Index dim_a = int_pow(local_dim_, region.size());
        const Eigen::Index dim_e = amplitudes_.size() / dim_a;
        Eigen::Map<const Eigen::MatrixXcd> m(amplitudes_.data(), dim_e, dim_a);
        return (m.adjoint() * m).squaredNorm();
    }
    Eigen::MatrixXcd m = amplitude_matrix(region);
    return (m * m.adjoint()).squaredNorm();
}

}  // namespace mlab
