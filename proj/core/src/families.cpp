#include "qmemc/families.hpp"

#include <cmath>
#include <sstream>

#include "qmemc/entropy.hpp"
#include "qmemc/errors.hpp"
#include "qmemc/quantum.hpp"

namespace qmemc {

namespace {

void require_open_unit(double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) {
        std::ostringstream ss;
        ss << name << " = " << v << " outside (0, 1)";
        throw ParameterOutOfRange(ss.str());
    }
}

} // namespace

Generator golden_mean(int R, int k, double p) {
    if (R < 1 || k < 1) throw ParameterOutOfRange("golden_mean: R and k must be >= 1");
    require_open_unit(p, "golden_mean: p");
    RawMachine raw;
    raw.alphabet = {"0", "1"};
    raw.states.push_back("A");
    for (int i = 1; i <= R + k - 1; ++i) raw.states.push_back("B" + std::to_string(i));
    raw.transitions.push_back({"A", "1", "A", p});
    raw.transitions.push_back({"A", "0", "B1", 1.0 - p});
    for (int r = 1; r < R; ++r)
        raw.transitions.push_back({"B" + std::to_string(r), "0", "B" + std::to_string(r + 1), 1.0});
    for (int r = R; r <= R + k - 2; ++r)
        raw.transitions.push_back({"B" + std::to_string(r), "1", "B" + std::to_string(r + 1), 1.0});
    raw.transitions.push_back({"B" + std::to_string(R + k - 1), "1", "A", 1.0});
    return Generator::validate(raw);
}

Eigen::MatrixXd golden_mean_overlaps(int R, int k, double p) {
    if (R < 1 || k < 1) throw ParameterOutOfRange("golden_mean_overlaps: R and k must be >= 1");
    require_open_unit(p, "golden_mean_overlaps: p");
    const int n = R + k; // state order: A, B_1, ..., B_{R+k-1}
    Eigen::MatrixXd omega = Eigen::MatrixXd::Identity(n, n);
    for (int m = 0; m < k; ++m) {
        omega(0, R + m) = omega(R + m, 0) = std::sqrt(std::pow(p, k - m));
        for (int nn = 0; nn < k; ++nn)
            if (m != nn)
                omega(R + m, R + nn) = std::sqrt(std::pow(p, std::abs(m - nn)));
    }
    return omega;
}

Generator nemo(double p) {
    require_open_unit(p, "nemo: p");
    RawMachine raw;
    raw.states = {"A", "B", "C"};
    raw.alphabet = {"0", "1"};
    raw.transitions = {
        {"A", "0", "A", p}, {"A", "1", "B", 1.0 - p}, {"B", "1", "C", 1.0},
        {"C", "0", "A", 0.5}, {"C", "1", "A", 0.5},
    };
    return Generator::validate(raw);
}

NemoOverlapMagnitudes nemo_overlap_magnitudes(double p) {
    require_open_unit(p, "nemo_overlap_magnitudes: p");
    return {std::sqrt(p * (1.0 - p)) / (1.0 + p), std::sqrt(p) / (1.0 + p),
            std::sqrt(2.0 * p) / (1.0 + p)};
}

double nemo_combined_phase(const Generator& g, const PhaseAssignment& phi) {
    auto ph = [&](const char* sym, const char* st) {
        return phi.at(g, g.state_index(st), g.symbol_index(sym));
    };
    double theta = 3.0 * ph("0", "A") - 3.0 * ph("0", "C") + 2.0 * ph("1", "C") -
                   ph("1", "A") - ph("1", "B");
    double r = std::fmod(theta, 2.0 * std::numbers::pi);
    if (r < 0.0) r += 2.0 * std::numbers::pi;
    return r;
}

Generator two_step_erase(double p, double q, double r) {
    require_open_unit(p, "two_step_erase: p");
    require_open_unit(q, "two_step_erase: q");
    require_open_unit(r, "two_step_erase: r");
    if (p == q || q == r || p == r)
        throw NotMinimal("two_step_erase: p, q, r must be pairwise distinct");
    RawMachine raw;
    raw.states = {"A", "B", "C"};
    raw.alphabet = {"0", "1"};
    raw.transitions = {
        {"A", "0", "A", 1.0 - p}, {"A", "1", "B", p},
        {"B", "0", "A", 1.0 - q}, {"B", "1", "C", q},
        {"C", "0", "A", 1.0 - r}, {"C", "1", "B", r},
    };
    return Generator::validate(raw);
}

Generator markov_chain(const Eigen::MatrixXd& P, const std::vector<std::string>& symbols) {
    const int n = static_cast<int>(P.rows());
    if (P.cols() != n) throw Error("markov_chain: matrix must be square");
    if (static_cast<int>(symbols.size()) != n)
        throw Error("markov_chain: symbol count must match matrix dimension");
    for (int s = 0; s < n; ++s) {
        double row = P.row(s).sum();
        if (std::abs(row - 1.0) > 1e-12) {
            std::ostringstream ss;
            ss << "markov_chain: row " << s << " sums to " << row;
            throw RowSumMismatch(ss.str());
        }
    }
    RawMachine raw;
    raw.states = symbols;
    raw.alphabet = symbols;
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
            if (P(s, t) > kProbEps)
                raw.transitions.push_back({symbols[s], symbols[t], symbols[t], P(s, t)});
    return Generator::validate(raw); // throws NotIrreducible for reducible chains
}

GoldenMeanAdvantage golden_mean_advantage(int R, int k, double p) {
    if (R < 1 || k < 1) throw ParameterOutOfRange("golden_mean_advantage: R, k must be >= 1");
    require_open_unit(p, "golden_mean_advantage: p");
    const double Z = 1.0 + (R + k - 1) * (1.0 - p);

    // cryptic-block complexity contributions (functions of k and p only):
    // classical -Tr(D log2 D), quantum -Tr(M log2 M) with M = D^{1/2} W D^{1/2},
    // D = diag(1, (1-p) 1_k) over {A} u cryptic part, W the S17 closed form
    double cmu_k = -k * (1.0 - p) * std::log2(1.0 - p);
    Eigen::MatrixXd W = Eigen::MatrixXd::Identity(k + 1, k + 1);
    for (int m = 0; m < k; ++m) {
        W(0, 1 + m) = W(1 + m, 0) = std::sqrt(std::pow(p, k - m));
        for (int nn = 0; nn < k; ++nn)
            if (m != nn) W(1 + m, 1 + nn) = std::sqrt(std::pow(p, std::abs(m - nn)));
    }
    Eigen::VectorXd d(k + 1);
    d[0] = 1.0;
    for (int i = 1; i <= k; ++i) d[i] = 1.0 - p;
    Eigen::VectorXd dsq = d.cwiseSqrt();
    Eigen::MatrixXd M = dsq.asDiagonal() * W * dsq.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    double cq_k = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double v = es.eigenvalues()[i];
        if (v > 0.0) cq_k -= v * std::log2(v);
    }
    double delta_c = (cmu_k - cq_k) / Z;

    // conditional-on-'1' entropies; Pr(X=1) = (k(1-p)+p)/Z
    const double m1 = k * (1.0 - p) + p;
    double h1 = std::log2(m1) - (k - 1) * (1.0 - p) / m1 * std::log2(1.0 - p);
    // quantum conditional: |psi_A> with weight 1/m1, |psi_{B_{R+j}}> (j=1..k-1)
    // with weight (1-p)/m1 each; Gram from the same closed form
    Eigen::VectorXd w(k);
    w[0] = 1.0 / m1;
    for (int j = 1; j < k; ++j) w[j] = (1.0 - p) / m1;
    Eigen::MatrixXd G(k, k);
    auto block_index = [&](int i) { return i == 0 ? 0 : 1 + i; }; // A, B_{R+1}.. in W's frame
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            G(i, j) = std::sqrt(w[i] * w[j]) * W(block_index(i), block_index(j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eg(G, Eigen::EigenvaluesOnly);
    double hq1 = 0.0;
    for (Eigen::Index i = 0; i < eg.eigenvalues().size(); ++i) {
        double v = eg.eigenvalues()[i];
        if (v > 0.0) hq1 -= v * std::log2(v);
    }
    double delta_w = delta_c + (m1 / Z) * (hq1 - h1);
    return {delta_c, delta_w, delta_w / delta_c};
}

} // namespace qmemc
