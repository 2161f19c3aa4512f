// quantum.hpp — quantum implementations of predictive generators: overlap
// matrix fixed point, memory spectra, quantum reports, gauge machinery
//
// All physical quantities derive from the Gram matrix Omega_{rs} = <psi_r|psi_s>
// of the signal states; the states themselves are never materialized.

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "qmemc/classical.hpp"
#include "qmemc/generator.hpp"

namespace qmemc {

// one phase per supported (state, symbol) edge, aligned with Generator::edges()
class PhaseAssignment {
public:
    static PhaseAssignment zeros(const Generator& g);
    // values reduced mod 2pi on construction
    static PhaseAssignment from_edge_values(const Generator& g, std::vector<double> values);

    double at_edge(int e) const { return phi_[e]; }
    double at(const Generator& g, int s, int x) const { return phi_[g.edge_index(s, x)]; }
    const std::vector<double>& values() const { return phi_; }
    int size() const { return static_cast<int>(phi_.size()); }

private:
    std::vector<double> phi_;
};

struct OverlapOptions {
    double tol{1e-12};
    long max_iter{100000};
};

struct OverlapMatrix {
    Eigen::MatrixXcd omega;
    double residual{0.0};
    long iterations{0};
};

// Fixed point of
//   Omega_{rs} = sum_x sqrt(Pr(x|r) Pr(x|s)) e^{i(phi_{xs}-phi_{xr})} Omega_{f(x,r) f(x,s)}
// by iteration from the identity with unit diagonal re-pinned each step; a
// direct linear solve of the vectorized off-diagonal system is the fallback
// when iteration stalls. Result is Hermitian, unit-diagonal, PSD within 1e-9.
// Throws NotPredictive / NoConvergence.
OverlapMatrix solve_overlaps(const Generator& g, const PhaseAssignment& phi,
                             const OverlapOptions& opts = {});

// recursion residual of a candidate overlap matrix (sup norm)
double overlap_residual(const Generator& g, const PhaseAssignment& phi,
                        const Eigen::MatrixXcd& omega);

// Eigenvalues of D^{1/2} Omega D^{1/2}, D = diag(pi) — the spectrum of the
// stationary memory state rho_S. Ascending, clipped to [0, inf).
Eigen::VectorXd memory_spectrum(const OverlapMatrix& omega, const StationaryDistribution& pi);

// classical symbol distribution with per-symbol mixtures of signal states
// (weights plus state indices into Omega) describing rho'_{S|x}
struct CqState {
    struct Component {
        int state;     // index of |psi_state> in Omega
        double weight; // Pr(x|s) pi(s) / p(x)
    };
    Eigen::VectorXd p_x;
    std::vector<std::vector<Component>> conditionals; // per symbol

    // weighted Gram matrix whose nonzero spectrum equals that of rho'_{S|x}
    Eigen::MatrixXcd conditional_gram(int x, const Eigen::MatrixXcd& omega) const;
};

CqState cq_state(const Generator& g, const StationaryDistribution& pi);

// symbol distribution plus per-symbol conditional spectra; the classical
// diagonal data that the one-shot module consumes
struct CqSpectra {
    Eigen::VectorXd p_x;
    std::vector<Eigen::VectorXd> conditional_spectra;
};

CqSpectra cq_spectra(const Generator& g, const StationaryDistribution& pi,
                     const OverlapMatrix& omega);

struct QuantumReport {
    double C_q{0.0};
    double N_q{0.0};
    double W_q{0.0};     // units of k_B T ln 2
    double Delta_C{0.0}; // C_mu - C_q
    double Delta_W{0.0}; // W_mu - W_q
    std::optional<double> e_q; // Delta_W / Delta_C, undefined when Delta_C <= 1e-9
};

// C_q = H(spec rho_S), N_q = sum_x p(x) H(spec rho'_{S|x}), W_q = C_q - N_q - H[X].
// Invariants C_q <= C_mu + 1e-9 and W_q <= W_mu + 1e-9 are asserted internally.
QuantumReport quantum_report(const Generator& g, const StationaryDistribution& pi,
                             const OverlapMatrix& omega);

struct DataProcessingCheck {
    double I_q{0.0};        // I_q[S':X] = C_q - N_q
    double I_classical{0.0}; // I[S':X] from the joint table
    bool holds{false};       // I_q <= I + 1e-9
};

DataProcessingCheck data_processing_check(const Generator& g, const StationaryDistribution& pi,
                                          const OverlapMatrix& omega);

// phi~_{xs} = phi_{xs} - Psi_s + Psi_{f(x,s)} for a per-state phase map Psi
PhaseAssignment gauge_transform(const Generator& g, const PhaseAssignment& phi,
                                const std::vector<double>& psi);

struct LoopInvariant {
    std::string description;       // signed sum over edge phases
    double value{0.0};             // reduced to [0, 2pi)
    std::vector<int> coefficients; // integer coefficient per edge
};

// Signed phase sums over a fundamental cycle basis of the transition
// multigraph (spanning tree over the support graph; self-loops and non-tree
// edges each contribute one invariant). Gauge transformations leave every
// invariant unchanged.
std::vector<LoopInvariant> loop_invariants(const Generator& g, const PhaseAssignment& phi);

// circular difference |a - b| mod 2pi, in [0, pi]
double angle_distance(double a, double b);

} // namespace qmemc
