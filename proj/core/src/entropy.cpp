#include "qmemc/entropy.hpp"

#include <cmath>
#include <sstream>

#include "qmemc/errors.hpp"

namespace qmemc {

double shannon(const Eigen::VectorXd& dist) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < dist.size(); ++i) {
        if (dist[i] < 0.0) {
            std::ostringstream ss;
            ss << "shannon: negative entry " << dist[i] << " at index " << i;
            throw NotNormalized(ss.str());
        }
        sum += dist[i];
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        std::ostringstream ss;
        ss << "shannon: entries sum to " << sum << ", not 1";
        throw NotNormalized(ss.str());
    }
    double h = 0.0;
    for (Eigen::Index i = 0; i < dist.size(); ++i) {
        if (dist[i] > 0.0) h -= dist[i] * std::log2(dist[i]);
    }
    return h;
}

double spectrum_entropy(const Eigen::VectorXd& spectrum) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
        double v = spectrum[i];
        if (v < -1e-9) {
            std::ostringstream ss;
            ss << "spectrum_entropy: eigenvalue " << v << " below PSD slack";
            throw NotNormalized(ss.str());
        }
        if (v > 0.0) h -= v * std::log2(v);
    }
    return h;
}

std::pair<double, double> h_min_max_unconditional(const Eigen::VectorXd& spectrum) {
    double sum = 0.0, maxv = 0.0, sumsqrt = 0.0;
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
        double v = spectrum[i];
        if (v < -1e-12) throw NotNormalized("h_min_max: negative spectrum entry");
        if (v < 0.0) v = 0.0;
        sum += v;
        if (v > maxv) maxv = v;
        sumsqrt += std::sqrt(v);
    }
    if (std::abs(sum - 1.0) > 1e-10) throw NotNormalized("h_min_max: spectrum not normalized");
    return {-std::log2(maxv), 2.0 * std::log2(sumsqrt)};
}

double entropy_of_weights(const std::vector<double>& w) {
    double h = 0.0;
    for (double v : w)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

double binary_entropy(double p) {
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

} // namespace qmemc
