// entropy.hpp — Shannon entropy and one-shot (min/max) entropies of spectra
//
// All entropies are in bits (log base 2). Work-rate quantities elsewhere are
// expressed in units of k_B T ln 2, so they share these units.

#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace qmemc {

// -sum p log2 p with 0 log 0 := 0. Requires nonnegative entries summing to 1
// within 1e-12; throws NotNormalized otherwise.
double shannon(const Eigen::VectorXd& dist);

// Entropy of an eigenvalue spectrum. Eigenvalues in [-1e-9, 0) are clipped to
// zero (numerical PSD slack); anything more negative throws NotNormalized.
double spectrum_entropy(const Eigen::VectorXd& spectrum);

// H_min = -log2 max_i p_i, H_max = 2 log2 sum_i sqrt(p_i)
std::pair<double, double> h_min_max_unconditional(const Eigen::VectorXd& spectrum);

// entropy of raw weights without normalization checks (internal helper)
double entropy_of_weights(const std::vector<double>& w);

double binary_entropy(double p);

} // namespace qmemc
