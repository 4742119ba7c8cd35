#include "mlab/haar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlab {

Eigen::MatrixXcd sample_haar_unitary(int dim, Rng& rng) {
    if (dim < 1) throw std::invalid_argument("sample_haar_unitary: dim < 1");
    Eigen::MatrixXcd ginibre(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i)
            ginibre(i, j) = rng.gaussian_complex();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        std::complex<double> rjj = r(j, j);
        double mag = std::abs(rjj);
        // Ginibre columns are almost surely full rank; a zero diagonal entry
        // would mean a degenerate draw, keep the column as-is in that case.
        if (mag > 0.0) q.col(j) *= rjj / mag;
    }
    return q;
}

Eigen::VectorXcd sample_haar_state(int dim, Rng& rng) {
    if (dim < 1) throw std::invalid_argument("sample_haar_state: dim < 1");
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = rng.gaussian_complex();
    return v / v.norm();
}

double porter_thomas_ks(std::vector<double> samples, int dim) {
    if (samples.empty()) throw std::invalid_argument("porter_thomas_ks: no samples");
    for (double x : samples)
        if (x < 0.0 || x > 1.0)
            throw std::invalid_argument("porter_thomas_ks: sample outside [0,1]");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double cdf = 1.0 - std::exp(-static_cast<double>(dim) * samples[i]);
        double lo = static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n;
        ks = std::max(ks, std::max(std::abs(cdf - lo), std::abs(hi - cdf)));
    }
    return ks;
}

}  // namespace mlab
