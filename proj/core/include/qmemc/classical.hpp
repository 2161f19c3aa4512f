// classical.hpp — Shannon-information quantities of a predictive generator:
// statistical complexity, non-Markovity, entropy rate, classical work rate,
// and the Markov / cryptic orders

#pragma once

#include <string>

#include "qmemc/generator.hpp"

namespace qmemc {

struct OrderResult {
    bool exceeds_cap{false};
    int value{0};

    static OrderResult of(int v) { return {false, v}; }
    static OrderResult capped() { return {true, 0}; }
    bool operator==(const OrderResult&) const = default;
    std::string to_string() const { return exceeds_cap ? "exceeds-cap" : std::to_string(value); }
};

struct ClassicalReport {
    double C_mu{0.0};  // H(pi), statistical complexity
    double N_mu{0.0};  // H[S'|X], non-Markovity
    double H_X{0.0};   // single-symbol entropy
    double h_mu{0.0};  // entropy rate (predictive closed form)
    double W_mu{0.0};  // work rate, units of k_B T ln 2 (always <= 0)
    OrderResult markov_order;
    OrderResult cryptic_order;
};

struct OrderOptions {
    int markov_cap{16};
    int cryptic_cap{16};
    int horizon{256}; // BFS depth budget for closure certification
};

// C_mu = H(pi); N_mu = H[S'|X]; h_mu = sum_s pi(s) H[X|S=s] (unifilar closed
// form); W_mu = C_mu - N_mu - H_X. The identities W_mu = -H[X|S'] and
// -h_mu <= W_mu <= 0 are asserted internally (1e-10). Throws NotPredictive.
ClassicalReport classical_report(const Generator& g, const StationaryDistribution& pi,
                                 const OrderOptions& opts = {});

// Smallest R such that every allowed length-R word maps the full state set to
// a singleton under subset construction (so H[S|last R symbols] = 0).
// Returns exceeds-cap if none is found at or below cap (including provably
// infinite orders, detected by subset recurrence).
OrderResult markov_order(const Generator& g, int cap);

// Smallest k such that, along every infinite allowed word, all initial states
// consistent with the word reach the same state after the first k symbols.
// Certified through cycle analysis of the (anchor, current)-pair-set
// automaton; throws HorizonInconclusive if the automaton has not closed
// within the horizon depth budget.
OrderResult cryptic_order(const Generator& g, int cap, int horizon);

} // namespace qmemc
