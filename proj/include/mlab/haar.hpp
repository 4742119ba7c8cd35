#ifndef MLAB_HAAR_HPP
#define MLAB_HAAR_HPP

#include <Eigen/Dense>
#include <vector>

#include "mlab/random.hpp"

namespace mlab {

/// Haar-distributed unitary on U(dim), sampled as a complex Ginibre matrix
/// followed by QR with the R-diagonal phase correction (each column of Q is
/// multiplied by the phase of the corresponding R diagonal entry, so that the
/// implicit R factor has a positive diagonal).
Eigen::MatrixXcd sample_haar_unitary(int dim, Rng& rng);

/// Haar-random pure state: normalized vector of iid complex Gaussians.
Eigen::VectorXcd sample_haar_state(int dim, Rng& rng);

/// Kolmogorov-Smirnov distance between the empirical distribution of
/// dim * samples[i] and the Exp(1) law. Born probabilities of Haar states
/// follow Porter-Thomas, so this should be small for large sample pools.
double porter_thomas_ks(std::vector<double> samples, int dim);

}  // namespace mlab

#endif
