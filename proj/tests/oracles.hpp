// oracles.hpp — test-only reference computations, independent of the library
// implementation paths they validate

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "qmemc/generator.hpp"
#include "qmemc/quantum.hpp"
#include "qmemc/rng.hpp"

namespace oracles {

using qmemc::Generator;
using qmemc::RandomStream;
using qmemc::RawMachine;

// ----------------------- random predictive machines -------------------------

// seeded random predictive irreducible generator, <= max_states states and
// <= max_symbols symbols; row sums exactly 1
inline Generator random_predictive(RandomStream& rs, int max_states, int max_symbols) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        int n = 1 + static_cast<int>(rs.next_below(max_states));
        int m = 2 + static_cast<int>(rs.next_below(std::max(1, max_symbols - 1)));
        RawMachine raw;
        for (int s = 0; s < n; ++s) raw.states.push_back("s" + std::to_string(s));
        for (int x = 0; x < m; ++x) raw.alphabet.push_back(std::to_string(x));
        for (int s = 0; s < n; ++s) {
            std::vector<int> support;
            for (int x = 0; x < m; ++x)
                if (rs.next_double() < 0.7) support.push_back(x);
            if (support.empty()) support.push_back(static_cast<int>(rs.next_below(m)));
            std::vector<double> w(support.size());
            double tot = 0.0;
            for (auto& v : w) {
                v = -std::log(1.0 - rs.next_double());
                tot += v;
            }
            double acc = 0.0;
            for (size_t i = 0; i < support.size(); ++i) {
                double p = (i + 1 == support.size()) ? 1.0 - acc : w[i] / tot;
                acc += w[i] / tot;
                raw.transitions.push_back({raw.states[s], raw.alphabet[support[i]],
                                           raw.states[rs.next_below(n)], p});
            }
        }
        try {
            return Generator::validate(raw);
        } catch (const qmemc::Error&) {
            continue; // not irreducible; redraw
        }
    }
    throw std::runtime_error("random_predictive: could not draw an irreducible machine");
}

// ------------------------- word distribution tools --------------------------

// Pr(w | start state s) for every word of the given length, by enumeration
inline std::map<std::vector<int>, double> word_distribution(const Generator& g, int s, int length) {
    std::map<std::vector<int>, double> out;
    struct Item {
        int state;
        double p;
        std::vector<int> word;
    };
    std::vector<Item> frontier{{s, 1.0, {}}};
    for (int t = 0; t < length; ++t) {
        std::vector<Item> next;
        for (const auto& it : frontier)
            for (const auto& tr : g.transitions())
                if (tr.from == it.state) {
                    Item jt{tr.to, it.p * tr.p, it.word};
                    jt.word.push_back(tr.symbol);
                    next.push_back(std::move(jt));
                }
        frontier = std::move(next);
    }
    for (const auto& it : frontier) out[it.word] += it.p;
    return out;
}

// stationary-weighted distribution over length-L words
inline std::map<std::vector<int>, double> block_distribution(const Generator& g,
                                                             const Eigen::VectorXd& pi,
                                                             int length) {
    std::map<std::vector<int>, double> out;
    for (int s = 0; s < g.num_states(); ++s) {
        auto d = word_distribution(g, s, length);
        for (const auto& [w, p] : d) out[w] += pi[s] * p;
    }
    return out;
}

// predictive-equivalence partition by brute-force word-distribution comparison
inline std::vector<int> equivalence_partition(const Generator& g, int length, double tol) {
    const int n = g.num_states();
    std::vector<std::map<std::vector<int>, double>> dists;
    for (int s = 0; s < n; ++s) dists.push_back(word_distribution(g, s, length));
    auto close = [&](int a, int b) {
        std::map<std::vector<int>, double> merged = dists[a];
        for (const auto& [w, p] : dists[b]) merged.try_emplace(w, 0.0);
        for (const auto& [w, unused] : merged) {
            double pa = dists[a].count(w) ? dists[a].at(w) : 0.0;
            double pb = dists[b].count(w) ? dists[b].at(w) : 0.0;
            if (std::abs(pa - pb) > tol) return false;
        }
        return true;
    };
    std::vector<int> block(n, -1);
    int cnt = 0;
    for (int s = 0; s < n; ++s) {
        if (block[s] != -1) continue;
        block[s] = cnt;
        for (int t = s + 1; t < n; ++t)
            if (block[t] == -1 && close(s, t)) block[t] = cnt;
        ++cnt;
    }
    return block;
}

// ------------------------ conditional-entropy oracles ------------------------

// grid search over the conditioning state sigma (diagonal, simplex grid) for
// H_min[A|X] = max_sigma sup { lam : rho_AX <= 2^-lam 1 (x) sigma }
inline double grid_hmin_conditional(const Eigen::VectorXd& px,
                                    const std::vector<Eigen::VectorXd>& spectra, int grid) {
    const int X = static_cast<int>(px.size());
    double best = -1e300;
    auto value = [&](const std::vector<double>& sigma) {
        double worst = 1e300;
        for (int x = 0; x < X; ++x) {
            if (px[x] <= 0.0) continue;
            double lmax = spectra[x].size() ? spectra[x].maxCoeff() : 0.0;
            if (lmax <= 0.0) continue;
            if (sigma[x] <= 0.0) return -1e300;
            worst = std::min(worst, -std::log2(px[x] * lmax / sigma[x]));
        }
        return worst;
    };
    if (X == 2) {
        for (int i = 1; i < grid; ++i) {
            std::vector<double> s{static_cast<double>(i) / grid, 1.0 - static_cast<double>(i) / grid};
            best = std::max(best, value(s));
        }
    } else if (X == 3) {
        int side = static_cast<int>(std::sqrt(static_cast<double>(grid)));
        for (int i = 1; i < side; ++i)
            for (int j = 1; j < side - i; ++j) {
                std::vector<double> s{static_cast<double>(i) / side, static_cast<double>(j) / side,
                                      1.0 - static_cast<double>(i + j) / side};
                best = std::max(best, value(s));
            }
    }
    return best;
}

// grid search for H_max[A|X] = max_sigma 2 log2 sum_x sqrt(p_x sigma_x) Tr sqrt(rho_x)
inline double grid_hmax_conditional(const Eigen::VectorXd& px,
                                    const std::vector<Eigen::VectorXd>& spectra, int grid) {
    const int X = static_cast<int>(px.size());
    std::vector<double> c(X, 0.0);
    for (int x = 0; x < X; ++x)
        if (spectra[x].size()) c[x] = spectra[x].cwiseMax(0.0).cwiseSqrt().sum();
    double best = -1e300;
    auto value = [&](const std::vector<double>& sigma) {
        double f = 0.0;
        for (int x = 0; x < X; ++x) f += std::sqrt(px[x] * sigma[x]) * c[x];
        return 2.0 * std::log2(f);
    };
    if (X == 2) {
        for (int i = 1; i < grid; ++i) {
            std::vector<double> s{static_cast<double>(i) / grid, 1.0 - static_cast<double>(i) / grid};
            best = std::max(best, value(s));
        }
    } else if (X == 3) {
        int side = static_cast<int>(std::sqrt(static_cast<double>(grid)));
        for (int i = 1; i < side; ++i)
            for (int j = 1; j < side - i; ++j) {
                std::vector<double> s{static_cast<double>(i) / side, static_cast<double>(j) / side,
                                      1.0 - static_cast<double>(i + j) / side};
                best = std::max(best, value(s));
            }
    }
    return best;
}

// -------------------------- smoothing search oracle --------------------------

// exhaustive feasible-point search over diagonal smoothings of a small
// spectrum: all subset cuts plus random in-ball perturbations. Returns the
// best (min H_max, max H_min) found inside the ball sqrt(1-F) < eps.
struct SmoothSearch {
    double best_hmax;
    double best_hmin;
};

inline SmoothSearch smooth_search(const Eigen::VectorXd& p, double eps, RandomStream& rs) {
    const int d = static_cast<int>(p.size());
    auto feasible = [&](const Eigen::VectorXd& q) {
        double f = 0.0;
        for (int i = 0; i < d; ++i) f += std::sqrt(p[i] * q[i]);
        return std::sqrt(std::max(0.0, 1.0 - f)) < eps;
    };
    auto hmax_of = [&](const Eigen::VectorXd& q) {
        return 2.0 * std::log2(q.cwiseMax(0.0).cwiseSqrt().sum());
    };
    auto hmin_of = [&](const Eigen::VectorXd& q) { return -std::log2(q.maxCoeff()); };

    SmoothSearch out{hmax_of(p), hmin_of(p)};
    // subset cuts
    for (int mask = 0; mask < (1 << d); ++mask) {
        Eigen::VectorXd q = p;
        for (int i = 0; i < d; ++i)
            if (mask & (1 << i)) q[i] = 0.0;
        double s = q.sum();
        if (s <= 0.0) continue;
        q /= s;
        if (feasible(q)) out.best_hmax = std::min(out.best_hmax, hmax_of(q));
    }
    // random perturbations
    for (int it = 0; it < 20000; ++it) {
        Eigen::VectorXd q(d);
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            double scale = 1.0 + 0.5 * (rs.next_double() - 0.5);
            q[i] = std::max(0.0, p[i] * scale);
            s += q[i];
        }
        if (s <= 0.0) continue;
        q /= s;
        if (feasible(q)) {
            out.best_hmax = std::min(out.best_hmax, hmax_of(q));
            out.best_hmin = std::max(out.best_hmin, hmin_of(q));
        }
    }
    return out;
}

// ------------------------------ integer lattices -----------------------------

// Hermite normal form (row lattice canonical form); small matrices only
inline std::vector<std::vector<long long>> hnf(std::vector<std::vector<long long>> M) {
    if (M.empty()) return M;
    const size_t cols = M[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < M.size(); ++c) {
        // gcd-eliminate column c among rows >= r
        while (true) {
            size_t piv = r;
            long long best = 0;
            for (size_t i = r; i < M.size(); ++i)
                if (M[i][c] != 0 && (best == 0 || std::abs(M[i][c]) < best)) {
                    best = std::abs(M[i][c]);
                    piv = i;
                }
            if (best == 0) break;
            std::swap(M[r], M[piv]);
            bool reduced = true;
            for (size_t i = r + 1; i < M.size(); ++i)
                if (M[i][c] != 0) {
                    long long qd = M[i][c] / M[r][c];
                    for (size_t j = 0; j < cols; ++j) M[i][j] -= qd * M[r][j];
                    if (M[i][c] != 0) reduced = false;
                }
            if (reduced) break;
        }
        if (M[r][c] == 0) continue;
        if (M[r][c] < 0)
            for (size_t j = 0; j < cols; ++j) M[r][j] = -M[r][j];
        for (size_t i = 0; i < r; ++i) {
            long long qd = (M[i][c] >= 0 ? M[i][c] : M[i][c] - (M[r][c] - 1)) / M[r][c];
            for (size_t j = 0; j < cols; ++j) M[i][j] -= qd * M[r][j];
        }
        ++r;
    }
    M.resize(r); // drop zero rows
    return M;
}

inline bool same_lattice(const std::vector<std::vector<long long>>& A,
                         const std::vector<std::vector<long long>>& B) {
    return hnf(A) == hnf(B);
}

} // namespace oracles
