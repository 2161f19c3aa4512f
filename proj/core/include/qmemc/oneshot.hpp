// oneshot.hpp — one-shot (min/max) entropies, certified spectrum smoothing,
// single-shot work bounds, and asymptotic-equipartition checks
//
// Smoothing is restricted to spectrum-diagonal perturbations inside the ball
// sqrt(1 - F(p, p~)) < eps with F the root fidelity sum_i sqrt(p_i p~_i).
// Feasible points give one-sided certificates: the reported H_max value is an
// upper bound on H_max^eps, the reported H_min value a lower bound on
// H_min^eps. Reported bounds omit every O(log 1/eps) additive term.

#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "qmemc/generator.hpp"
#include "qmemc/quantum.hpp"

namespace qmemc {

enum class SmoothDirection { max, min };

struct SpectrumSmoothing {
    Eigen::VectorXd original;
    Eigen::VectorXd smoothed;
    double achieved_distance{0.0}; // sqrt(1 - F), strictly below eps
};

// direction=max: zero the largest prefix of smallest-probability mass and
// renormalize (certified upper bound on H_max^eps). direction=min: cap the
// largest probabilities at the smallest feasible threshold and renormalize
// (certified lower bound on H_min^eps). eps = 0 returns the spectrum
// unchanged; throws EpsilonOutOfRange outside [0, 1).
SpectrumSmoothing smooth_spectrum(const Eigen::VectorXd& spectrum, double eps,
                                  SmoothDirection direction);

// closed forms for a classical conditioning system:
//   H_min[A|X] = -log2 sum_x p(x) lambda_max(rho_x)
//   H_max[A|X] =  log2 sum_x p(x) (Tr sqrt(rho_x))^2
std::pair<double, double> h_min_max_conditional_cq(const CqSpectra& cq);

struct OneShotReport {
    double epsilon{0.0};
    double H_max_S_smooth{0.0}; // certified upper bound on H_max^{eps^2/4}[S]
    double H_min_cond{0.0};     // certified lower bound on H_min^{eps^2/64}[S'|X]
    double H_min_X{0.0};        // certified lower bound on H_min^{eps^2/64}[X]
    double bound_bits{0.0};     // H_max_S_smooth - H_min_cond - H_min_X
    bool o_term_omitted{true};
};

// Single-shot work bound for one generator implementation, with the smoothing
// budgets eps^2/4 (memory) and eps^2/64 (conditional and symbol terms).
// eps = 0 disables smoothing and reports the raw one-shot value.
OneShotReport single_shot_bound(const Generator& g, const StationaryDistribution& pi,
                                const OverlapMatrix& omega, double eps);

struct AepPoint {
    long N{0};
    double epsilon{0.0};
    double hmax_rate{0.0}; // certified H_max^eps bound of p^(x)N) per copy
    double hmin_rate{0.0}; // certified H_min^eps bound per copy
    double shannon{0.0};
    double gap{0.0}; // |hmax_rate - shannon|
};

// Smooth-entropy rates of an N-fold product spectrum via type-class dynamic
// programming (log domain, nothing 2^N is materialized). Binary alphabets up
// to N = 1e5; small alphabets while the composition count stays reasonable,
// otherwise AlphabetTooLarge.
AepPoint aep_check(const Eigen::VectorXd& p, long N, double eps);

struct ChainRuleProbe {
    double lhs_s5{0.0}, rhs_s5{0.0};
    double lhs_s6{0.0}, rhs_s6{0.0};
    bool s5_satisfied{false};
    bool s6_satisfied{false};
    bool meaningful{true}; // false when 4*delta >= 1 (ball covers state space)
};

// Diagnostic evaluation of the smooth chain rules
//   H_max^d[S|X] <= H_max^{4d}[SX] - H_min^d[X] + slack
//   H_min^d[S|X] <= H_min^{4d}[SX] - H_min^d[X] + slack
// with a user-supplied slack standing in for the unquantified O(log 1/d)
// term. Never an acceptance gate.
ChainRuleProbe chain_rule_probe(const CqSpectra& cq, double delta, double slack);

} // namespace qmemc
