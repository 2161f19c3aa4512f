// generator.hpp — finite hidden Markov generators: validation, stationary
// distribution, joint table, minimization, and word sampling
//
// A generator is a finite-state machine over states S and alphabet X with
// transition probabilities Pr(s', x | s). Validated machines are immutable;
// all operations here are pure functions, safe to share across threads.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qmemc {

// support threshold: probabilities at or below this count as zero
inline constexpr double kProbEps = 1e-12;

struct RawMachine {
    struct Edge {
        std::string from;
        std::string symbol;
        std::string to;
        double p{0.0};
    };
    std::vector<std::string> states;
    std::vector<std::string> alphabet;
    std::vector<Edge> transitions;
};

struct Transition {
    int from{-1};
    int symbol{-1};
    int to{-1};
    double p{0.0};
};

class Generator {
public:
    // Validates a raw description: per-state row sums within 1e-12 of 1,
    // no negative probabilities, no duplicate (from,symbol,to) edges,
    // strong connectivity of the support graph. Computes the predictive
    // (unifilar) flag. Throws NegativeProbability / RowSumMismatch /
    // DuplicateEdge / NotIrreducible.
    static Generator validate(const RawMachine& raw);

    int num_states() const { return static_cast<int>(states_.size()); }
    int num_symbols() const { return static_cast<int>(alphabet_.size()); }
    const std::vector<std::string>& states() const { return states_; }
    const std::vector<std::string>& alphabet() const { return alphabet_; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    bool predictive() const { return predictive_; }

    // Pr(x|s), summed over target states
    double prob(int s, int x) const { return emit_(s, x); }
    bool supported(int s, int x) const { return emit_(s, x) > kProbEps; }

    // f(x,s) for predictive machines; -1 when (s,x) is unsupported.
    // Throws NotPredictive when called on a non-unifilar machine.
    int successor(int s, int x) const;

    // supported (state, symbol) pairs in declaration order; this enumeration
    // fixes the layout of phase assignments and sweep CSV columns
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    int edge_index(int s, int x) const { return edge_index_(s, x); }

    // state-to-state transition matrix T[s][s'] = sum_x Pr(s',x|s)
    Eigen::MatrixXd transition_matrix() const;

    int state_index(const std::string& label) const;
    int symbol_index(const std::string& label) const;

    RawMachine to_raw() const;

private:
    Generator() = default;

    double emit_(int s, int x) const { return emit_prob_[static_cast<size_t>(s) * alphabet_.size() + x]; }
    int edge_index_(int s, int x) const { return edge_lookup_[static_cast<size_t>(s) * alphabet_.size() + x]; }

    std::vector<std::string> states_;
    std::vector<std::string> alphabet_;
    std::vector<Transition> transitions_;
    std::vector<double> emit_prob_;       // n*m, Pr(x|s)
    std::vector<int> successor_;          // n*m, predictive successor or -1
    std::vector<int> edge_lookup_;        // n*m -> edge index or -1
    std::vector<std::pair<int, int>> edges_;
    bool predictive_{false};
};

struct StationaryDistribution {
    Eigen::VectorXd pi;
    double residual{0.0}; // ||pi^T T - pi^T||_inf
};

// Unique stationary distribution of an irreducible generator. Direct dense
// solve of (T^T - I)pi = 0 with a normalization row; power-iteration fallback
// (tol 1e-14, cap 1e6) if the solve residual exceeds 1e-10.
StationaryDistribution stationary(const Generator& g);

struct JointTable {
    int num_states{0};
    int num_symbols{0};
    std::vector<double> p; // index (s' * m + x) * n + s

    double& at(int sp, int x, int s) {
        return p[(static_cast<size_t>(sp) * num_symbols + x) * num_states + s];
    }
    double at(int sp, int x, int s) const {
        return p[(static_cast<size_t>(sp) * num_symbols + x) * num_states + s];
    }
    Eigen::VectorXd symbol_marginal() const;     // Pr(x)
    Eigen::VectorXd next_state_marginal() const; // Pr(s')
};

// P(s',x,s) = Pr(s',x|s) pi(s)
JointTable joint_distribution(const Generator& g, const StationaryDistribution& pi);

// Merge predictively equivalent states (partition refinement on per-symbol
// emission probabilities and successor blocks; probabilities compared with
// tolerance 1e-9). Idempotent. Throws NotPredictive on non-unifilar input.
Generator minimize(const Generator& g);

// count words of the given length; initial state drawn from pi, symbols from
// Pr(x|s). Deterministic for a fixed seed. Words are symbol-index sequences.
std::vector<std::vector<int>> sample_words(const Generator& g,
                                           const StationaryDistribution& pi,
                                           int length, int count,
                                           std::uint64_t seed);

} // namespace qmemc
