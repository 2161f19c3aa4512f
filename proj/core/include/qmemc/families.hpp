// families.hpp — parametric constructors and closed-form references for the
// four example generator families

#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "qmemc/generator.hpp"

namespace qmemc {

// R,k-Golden Mean generator: states {A, B_1..B_{R+k-1}}. A self-loops on '1'
// with probability p and feeds B_1 on '0'; the Markov part B_1..B_{R-1}
// emits '0' deterministically, the cryptic part B_R..B_{R+k-1} emits '1',
// and B_{R+k-1} closes to A. Markov order max(R,k), cryptic order k.
Generator golden_mean(int R, int k, double p);

// gauge-fixed closed-form overlap matrix: Omega_{A,B_{R+m}} = sqrt(p^{k-m}),
// Omega_{B_{R+m},B_{R+n}} = sqrt(p^{|m-n|}); Markov-part rows orthogonal
Eigen::MatrixXd golden_mean_overlaps(int R, int k, double p);

// Nemo generator: A -0:p-> A, A -1:(1-p)-> B, B -1:1-> C, C -0:1/2-> A,
// C -1:1/2-> A. Infinite Markov and cryptic orders.
Generator nemo(double p);

// closed-form overlap magnitudes |AB|, |BC|, |CA| of the Nemo fixed point
struct NemoOverlapMagnitudes {
    double ab, bc, ca;
};
NemoOverlapMagnitudes nemo_overlap_magnitudes(double p);

// the single combined phase the Nemo overlap matrix depends on (determined
// numerically; equals the gauge-fixed phase of Omega_CA and the loop sum of
// the triangle product Omega_AB Omega_BC Omega_CA):
//   Theta = 3 phi_0A - 3 phi_0C + 2 phi_1C - phi_1A - phi_1B   (mod 2pi)
double nemo_combined_phase(const Generator& nemo_gen, const class PhaseAssignment& phi);

// Two-Step Erase generator: every '0' erases memory to A; f(1,A)=B,
// f(1,B)=C, f(1,C)=B; Pr(1|A)=p, Pr(1|B)=q, Pr(1|C)=r. Parameters must be
// pairwise distinct so the machine is minimal.
Generator two_step_erase(double p, double q, double r);

// Markov chain as its own generator: states are the symbols, transition
// (s, x=s', s') with probability P[s][s']
Generator markov_chain(const Eigen::MatrixXd& P, const std::vector<std::string>& symbols);

// closed-form memory/work advantages per the Golden-Mean cryptic-block
// reduction: Delta_C = (Cmu_K - Cq_K)/Z with Z = 1 + (R+k-1)(1-p),
// Delta_W = Delta_C + Pr(X=1) (Hq[S'|X=1] - H[S'|X=1]); the bracketed parts
// depend only on (k, p), so Z cancels in e_q and e_q is R-independent.
struct GoldenMeanAdvantage {
    double delta_c, delta_w, e_q;
};
GoldenMeanAdvantage golden_mean_advantage(int R, int k, double p);

} // namespace qmemc
