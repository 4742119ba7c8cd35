#include "mlab/replica.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mlab {

namespace {

constexpr int kMaxQ = 6;

void check_q(int q) {
    if (q < 1 || q > kMaxQ) throw std::invalid_argument("replica: Q must be in [1, 6]");
}

std::size_t factorial(int n) {
    std::size_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::size_t>(i);
    return f;
}

}  // namespace

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    check_q(static_cast<int>(images_.size()));
    std::vector<bool> seen(images_.size(), false);
    for (int x : images_) {
        if (x < 0 || x >= static_cast<int>(images_.size()) || seen[x])
            throw std::invalid_argument("Permutation: images are not a bijection");
        seen[x] = true;
    }
}

Permutation Permutation::identity(int q) {
    check_q(q);
    std::vector<int> im(q);
    std::iota(im.begin(), im.end(), 0);
    return Permutation(std::move(im));
}

Permutation Permutation::full_cycle(int q, int n) {
    check_q(q);
    if (n < 1 || n > q) throw std::invalid_argument("full_cycle: n out of range");
    std::vector<int> im(q);
    std::iota(im.begin(), im.end(), 0);
    for (int i = 0; i < n; ++i) im[i] = (i + 1) % n;
    return Permutation(std::move(im));
}

Permutation Permutation::swap_boundary(int q, int n, int k) {
    check_q(q);
    if (n < 1 || k < 0 || n * k > q)
        throw std::invalid_argument("swap_boundary: need n*k <= q");
    std::vector<int> im(q);
    std::iota(im.begin(), im.end(), 0);
    for (int c = 0; c < k; ++c)
        for (int i = 0; i < n; ++i) im[c * n + i] = c * n + (i + 1) % n;
    return Permutation(std::move(im));
}

Permutation Permutation::compose(const Permutation& other) const {
    if (q() != other.q()) throw std::invalid_argument("compose: mismatched Q");
    std::vector<int> im(images_.size());
    for (std::size_t x = 0; x < im.size(); ++x) im[x] = images_[other.images_[x]];
    return Permutation(std::move(im));
}

Permutation Permutation::inverse() const {
    std::vector<int> im(images_.size());
    for (std::size_t x = 0; x < im.size(); ++x) im[images_[x]] = static_cast<int>(x);
    return Permutation(std::move(im));
}

int Permutation::cycle_count() const {
    std::vector<bool> seen(images_.size(), false);
    int cycles = 0;
    for (std::size_t start = 0; start < images_.size(); ++start) {
        if (seen[start]) continue;
        ++cycles;
        std::size_t x = start;
        while (!seen[x]) {
            seen[x] = true;
            x = static_cast<std::size_t>(images_[x]);
        }
    }
    return cycles;
}

bool Permutation::is_identity() const {
    for (std::size_t x = 0; x < images_.size(); ++x)
        if (images_[x] != static_cast<int>(x)) return false;
    return true;
}

std::vector<Permutation> symmetric_group(int q) {
    check_q(q);
    std::vector<int> im(q);
    std::iota(im.begin(), im.end(), 0);
    std::vector<Permutation> group;
    group.reserve(factorial(q));
    do {
        group.emplace_back(im);
    } while (std::next_permutation(im.begin(), im.end()));
    return group;
}

std::size_t permutation_rank(const Permutation& g) {
    // Lexicographic rank via the Lehmer code.
    const int q = g.q();
    std::size_t rank = 0;
    for (int i = 0; i < q; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < q; ++j)
            if (g(j) < g(i)) ++smaller;
        rank += static_cast<std::size_t>(smaller) * factorial(q - 1 - i);
    }
    return rank;
}

double perm_overlap(const Permutation& g, const Permutation& h, int local_dim) {
    if (local_dim < 1) throw std::invalid_argument("perm_overlap: local_dim < 1");
    return std::pow(static_cast<double>(local_dim), g.inverse().compose(h).cycle_count());
}

WeingartenTable::WeingartenTable(int q, int gram_dim) : q_(q), gram_dim_(gram_dim) {
    check_q(q);
    if (gram_dim < q)
        throw std::invalid_argument("WeingartenTable: need D >= Q for an invertible Gram matrix");
    const auto group = symmetric_group(q);
    const std::size_t n = group.size();
    Eigen::MatrixXd gram(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            gram(a, b) = perm_overlap(group[a], group[b], gram_dim);
    Eigen::MatrixXd inv = gram.inverse();
    // Wg depends only on the relative permutation; read it off the identity
    // row (the identity has rank 0 in lexicographic order).
    values_.assign(n, 0.0);
    for (std::size_t b = 0; b < n; ++b) values_[b] = inv(0, b);
    // Class-average to remove round-off asymmetry between conjugate elements.
    std::vector<double> averaged(n, 0.0);
    for (std::size_t b = 0; b < n; ++b) {
        double sum = 0.0;
        int count = 0;
        for (const auto& h : group) {
            Permutation conj = h.compose(group[b]).compose(h.inverse());
            sum += values_[permutation_rank(conj)];
            ++count;
        }
        averaged[b] = sum / count;
    }
    values_ = std::move(averaged);
}

double WeingartenTable::value(const Permutation& g) const {
    if (g.q() != q_) throw std::invalid_argument("WeingartenTable::value: mismatched Q");
    return values_[permutation_rank(g)];
}

Eigen::VectorXd permutation_state_vector(const Permutation& g, int dim) {
    const int q = g.q();
    std::size_t total = 1;
    for (int r = 0; r < 2 * q; ++r) total *= static_cast<std::size_t>(dim);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total));
    // Iterate over the free indices (i_1..i_Q); each choice fixes one basis
    // component with j_r = i_{g(r)}.
    std::vector<int> idx(q, 0);
    while (true) {
        std::size_t flat = 0;
        for (int r = 0; r < q; ++r) {
            flat = flat * dim + static_cast<std::size_t>(idx[r]);
            flat = flat * dim + static_cast<std::size_t>(idx[g(r)]);
        }
        v(static_cast<Eigen::Index>(flat)) = 1.0;
        int pos = q - 1;
        while (pos >= 0 && ++idx[pos] == dim) idx[pos--] = 0;
        if (pos < 0) break;
    }
    return v;
}

Eigen::MatrixXd haar_moment_projector(int q, int dim) {
    check_q(q);
    double dim_check = std::pow(static_cast<double>(dim), 2 * q);
    if (dim_check > 2100.0)
        throw std::invalid_argument("haar_moment_projector: D^{2Q} exceeds the explicit-matrix cap");
    const auto group = symmetric_group(q);
    WeingartenTable wg(q, dim);
    std::vector<Eigen::VectorXd> states;
    states.reserve(group.size());
    for (const auto& g : group) states.push_back(permutation_state_vector(g, dim));
    const auto n = states[0].size();
    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t a = 0; a < group.size(); ++a)
        for (std::size_t b = 0; b < group.size(); ++b) {
            double coeff = wg.value(group[a].inverse().compose(group[b]));
            op.noalias() += coeff * states[a] * states[b].transpose();
        }
    return op;
}

}  // namespace mlab
