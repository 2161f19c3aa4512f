#include "qmemc/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "qmemc/entropy.hpp"
#include "qmemc/errors.hpp"

namespace qmemc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double mod_2pi(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

} // namespace

double angle_distance(double a, double b) {
    double d = mod_2pi(a - b);
    return std::min(d, kTwoPi - d);
}

PhaseAssignment PhaseAssignment::zeros(const Generator& g) {
    PhaseAssignment p;
    p.phi_.assign(g.edges().size(), 0.0);
    return p;
}

PhaseAssignment PhaseAssignment::from_edge_values(const Generator& g, std::vector<double> values) {
    if (values.size() != g.edges().size())
        throw DimensionMismatch("PhaseAssignment: value count does not match supported edges");
    for (double& v : values) v = mod_2pi(v);
    PhaseAssignment p;
    p.phi_ = std::move(values);
    return p;
}

namespace {

// one sweep of the defining recursion; diagonal pinned to 1
Eigen::MatrixXcd recursion_step(const Generator& g, const PhaseAssignment& phi,
                                const Eigen::MatrixXcd& omega) {
    const int n = g.num_states();
    const int m = g.num_symbols();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(n, n);
    for (int r = 0; r < n; ++r)
        for (int s = r + 1; s < n; ++s) {
            std::complex<double> acc{0.0, 0.0};
            for (int x = 0; x < m; ++x) {
                double pr = g.prob(r, x), ps = g.prob(s, x);
                if (pr <= kProbEps || ps <= kProbEps) continue;
                double ang = phi.at(g, s, x) - phi.at(g, r, x);
                acc += std::sqrt(pr * ps) * std::polar(1.0, ang) *
                       omega(g.successor(r, x), g.successor(s, x));
            }
            out(r, s) = acc;
            out(s, r) = std::conj(acc);
        }
    return out;
}

// direct solve of the vectorized off-diagonal system, in real variables
// (Re, Im per pair) because conjugate entries couple z and z-bar
Eigen::MatrixXcd linear_solve_overlaps(const Generator& g, const PhaseAssignment& phi) {
    const int n = g.num_states();
    const int m = g.num_symbols();
    const int K = n * (n - 1) / 2;
    std::vector<std::vector<int>> pair_id(n, std::vector<int>(n, -1));
    int k = 0;
    for (int r = 0; r < n; ++r)
        for (int s = r + 1; s < n; ++s) pair_id[r][s] = pair_id[s][r] = k++;

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * K, 2 * K);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * K);
    for (int r = 0; r < n; ++r)
        for (int s = r + 1; s < n; ++s) {
            int eq = pair_id[r][s];
            A(2 * eq, 2 * eq) += 1.0;
            A(2 * eq + 1, 2 * eq + 1) += 1.0;
            for (int x = 0; x < m; ++x) {
                double pr = g.prob(r, x), ps = g.prob(s, x);
                if (pr <= kProbEps || ps <= kProbEps) continue;
                std::complex<double> w =
                    std::sqrt(pr * ps) * std::polar(1.0, phi.at(g, s, x) - phi.at(g, r, x));
                int a = g.successor(r, x), c = g.successor(s, x);
                if (a == c) {
                    b[2 * eq] += w.real();
                    b[2 * eq + 1] += w.imag();
                } else {
                    int var = pair_id[a][c];
                    double sgn = (a < c) ? 1.0 : -1.0; // Omega_{ac} = conj(Omega_{ca})
                    // w * (u + i sgn v) contributes to (Re, Im) of the equation
                    A(2 * eq, 2 * var) -= w.real();
                    A(2 * eq, 2 * var + 1) -= -sgn * w.imag();
                    A(2 * eq + 1, 2 * var) -= w.imag();
                    A(2 * eq + 1, 2 * var + 1) -= sgn * w.real();
                }
            }
        }
    // minimum-norm solution; degenerate machines (identical rows) leave free
    // cycle components, which the physical classical embedding sets to zero
    Eigen::VectorXd z = A.completeOrthogonalDecomposition().solve(b);
    Eigen::MatrixXcd omega = Eigen::MatrixXcd::Identity(n, n);
    for (int r = 0; r < n; ++r)
        for (int s = r + 1; s < n; ++s) {
            int v = pair_id[r][s];
            omega(r, s) = {z[2 * v], z[2 * v + 1]};
            omega(s, r) = std::conj(omega(r, s));
        }
    return omega;
}

} // namespace

double overlap_residual(const Generator& g, const PhaseAssignment& phi,
                        const Eigen::MatrixXcd& omega) {
    return (recursion_step(g, phi, omega) - omega).cwiseAbs().maxCoeff();
}

OverlapMatrix solve_overlaps(const Generator& g, const PhaseAssignment& phi,
                             const OverlapOptions& opts) {
    if (!g.predictive()) throw NotPredictive("solve_overlaps: generator is not predictive");
    const int n = g.num_states();

    Eigen::MatrixXcd omega = Eigen::MatrixXcd::Identity(n, n);
    double res = overlap_residual(g, phi, omega);
    long it = 0;
    double prev = std::numeric_limits<double>::infinity();
    long stall_check = 2000;
    while (res > opts.tol && it < opts.max_iter) {
        omega = recursion_step(g, phi, omega);
        res = overlap_residual(g, phi, omega);
        ++it;
        if (it == stall_check) {
            // contraction too slow (near-identical emission rows): go direct
            if (res > opts.tol && res > 1e-8 * prev) break;
            prev = res;
            stall_check *= 2;
        }
    }
    if (res > opts.tol) {
        Eigen::MatrixXcd direct = linear_solve_overlaps(g, phi);
        double dres = overlap_residual(g, phi, direct);
        if (dres <= std::max(opts.tol, 1e-11)) {
            omega = direct;
            res = dres;
        } else {
            std::ostringstream ss;
            ss << "solve_overlaps: no convergence after " << it
               << " iterations (residual " << res << ", direct-solve residual " << dres << ")";
            throw NoConvergence(ss.str());
        }
    }

    // invariants: Hermitian by construction; check PSD within slack
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(omega, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9) {
        std::ostringstream ss;
        ss << "solve_overlaps: fixed point not PSD (min eigenvalue "
           << es.eigenvalues().minCoeff() << ")";
        throw NoConvergence(ss.str());
    }
    return {std::move(omega), res, it};
}

Eigen::VectorXd memory_spectrum(const OverlapMatrix& omega, const StationaryDistribution& pi) {
    const Eigen::Index n = omega.omega.rows();
    if (pi.pi.size() != n)
        throw DimensionMismatch("memory_spectrum: pi and Omega dimensions differ");
    Eigen::VectorXd d = pi.pi.cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXcd M = d.asDiagonal() * omega.omega * d.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseMax(0.0);
}

CqState cq_state(const Generator& g, const StationaryDistribution& pi) {
    if (!g.predictive()) throw NotPredictive("cq_state: generator is not predictive");
    const int n = g.num_states();
    const int m = g.num_symbols();
    CqState cq;
    cq.p_x = Eigen::VectorXd::Zero(m);
    for (int s = 0; s < n; ++s)
        for (int x = 0; x < m; ++x) cq.p_x[x] += pi.pi[s] * g.prob(s, x);
    cq.conditionals.resize(m);
    for (int x = 0; x < m; ++x) {
        if (cq.p_x[x] <= kProbEps) continue;
        for (int s = 0; s < n; ++s)
            if (g.supported(s, x))
                cq.conditionals[x].push_back({g.successor(s, x), pi.pi[s] * g.prob(s, x) / cq.p_x[x]});
    }
    return cq;
}

Eigen::MatrixXcd CqState::conditional_gram(int x, const Eigen::MatrixXcd& omega) const {
    const auto& comps = conditionals[x];
    const int c = static_cast<int>(comps.size());
    Eigen::MatrixXcd G(c, c);
    for (int i = 0; i < c; ++i)
        for (int j = 0; j < c; ++j)
            G(i, j) = std::sqrt(comps[i].weight * comps[j].weight) *
                      omega(comps[i].state, comps[j].state);
    return G;
}

CqSpectra cq_spectra(const Generator& g, const StationaryDistribution& pi,
                     const OverlapMatrix& omega) {
    CqState cq = cq_state(g, pi);
    CqSpectra sp;
    sp.p_x = cq.p_x;
    sp.conditional_spectra.resize(cq.conditionals.size());
    for (size_t x = 0; x < cq.conditionals.size(); ++x) {
        if (cq.conditionals[x].empty()) {
            sp.conditional_spectra[x] = Eigen::VectorXd::Zero(0);
            continue;
        }
        Eigen::MatrixXcd G = cq.conditional_gram(static_cast<int>(x), omega.omega);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
        sp.conditional_spectra[x] = es.eigenvalues().cwiseMax(0.0);
    }
    return sp;
}

QuantumReport quantum_report(const Generator& g, const StationaryDistribution& pi,
                             const OverlapMatrix& omega) {
    ClassicalReport cl;
    {
        // orders are not needed here; compute the entropic part directly
        if (!g.predictive()) throw NotPredictive("quantum_report: generator is not predictive");
        cl.C_mu = shannon(pi.pi);
        JointTable jt = joint_distribution(g, pi);
        Eigen::VectorXd px = jt.symbol_marginal();
        cl.H_X = shannon(px);
        double HSpX = 0.0;
        for (int sp = 0; sp < jt.num_states; ++sp)
            for (int x = 0; x < jt.num_symbols; ++x) {
                double v = 0.0;
                for (int s = 0; s < jt.num_states; ++s) v += jt.at(sp, x, s);
                if (v > 0.0) HSpX -= v * std::log2(v);
            }
        cl.N_mu = HSpX - cl.H_X;
        cl.W_mu = cl.C_mu - cl.N_mu - cl.H_X;
    }

    CqSpectra sp = cq_spectra(g, pi, omega);
    QuantumReport q;
    q.C_q = spectrum_entropy(memory_spectrum(omega, pi));
    q.N_q = 0.0;
    for (Eigen::Index x = 0; x < sp.p_x.size(); ++x)
        if (sp.p_x[x] > kProbEps)
            q.N_q += sp.p_x[x] * spectrum_entropy(sp.conditional_spectra[x]);
    q.W_q = q.C_q - q.N_q - cl.H_X;
    q.Delta_C = cl.C_mu - q.C_q;
    q.Delta_W = cl.W_mu - q.W_q;
    if (q.Delta_C > 1e-9) q.e_q = q.Delta_W / q.Delta_C;

    if (q.C_q > cl.C_mu + 1e-9)
        throw Error("quantum_report: C_q exceeds C_mu beyond tolerance");
    if (q.W_q > cl.W_mu + 1e-9)
        throw Error("quantum_report: W_q exceeds W_mu beyond tolerance");
    return q;
}

DataProcessingCheck data_processing_check(const Generator& g, const StationaryDistribution& pi,
                                          const OverlapMatrix& omega) {
    QuantumReport q = quantum_report(g, pi, omega);
    JointTable jt = joint_distribution(g, pi);
    double H_X = shannon(jt.symbol_marginal());
    double HSp = shannon(jt.next_state_marginal());
    double HSpX = 0.0;
    for (int sp = 0; sp < jt.num_states; ++sp)
        for (int x = 0; x < jt.num_symbols; ++x) {
            double v = 0.0;
            for (int s = 0; s < jt.num_states; ++s) v += jt.at(sp, x, s);
            if (v > 0.0) HSpX -= v * std::log2(v);
        }
    DataProcessingCheck dp;
    dp.I_q = q.C_q - q.N_q;
    dp.I_classical = HSp + H_X - HSpX;
    dp.holds = dp.I_q <= dp.I_classical + 1e-9;
    return dp;
}

PhaseAssignment gauge_transform(const Generator& g, const PhaseAssignment& phi,
                                const std::vector<double>& psi) {
    if (static_cast<int>(psi.size()) != g.num_states())
        throw DimensionMismatch("gauge_transform: Psi must assign a phase per state");
    std::vector<double> out(phi.values());
    for (size_t e = 0; e < g.edges().size(); ++e) {
        auto [s, x] = g.edges()[e];
        out[e] = phi.at_edge(static_cast<int>(e)) - psi[s] + psi[g.successor(s, x)];
    }
    return PhaseAssignment::from_edge_values(g, std::move(out));
}

std::vector<LoopInvariant> loop_invariants(const Generator& g, const PhaseAssignment& phi) {
    const int n = g.num_states();
    const int E = static_cast<int>(g.edges().size());

    // spanning tree over the undirected support graph (BFS from state 0);
    // potentials are integer combinations of tree-edge phases
    std::vector<std::vector<int>> pot(n); // coefficient per edge
    std::vector<bool> in_tree_edge(E, false);
    std::vector<bool> visited(n, false);
    for (int s = 0; s < n; ++s) pot[s].assign(E, 0);
    std::vector<int> queue{0};
    visited[0] = true;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int v = queue[qi];
        for (int e = 0; e < E; ++e) {
            auto [s, x] = g.edges()[e];
            int t = g.successor(s, x);
            if (s == t) continue; // self-loops are never tree edges
            if (s == v && !visited[t]) {
                // forward traversal: pot[t] = pot[s] + phi_e
                pot[t] = pot[s];
                pot[t][e] += 1;
                visited[t] = true;
                in_tree_edge[e] = true;
                queue.push_back(t);
            } else if (t == v && !visited[s]) {
                // backward traversal: pot[s] = pot[t] - phi_e
                pot[s] = pot[t];
                pot[s][e] -= 1;
                visited[s] = true;
                in_tree_edge[e] = true;
                queue.push_back(s);
            }
        }
    }

    std::vector<LoopInvariant> invariants;
    for (int e = 0; e < E; ++e) {
        if (in_tree_edge[e]) continue;
        auto [s, x] = g.edges()[e];
        int t = g.successor(s, x);
        LoopInvariant inv;
        inv.coefficients.assign(E, 0);
        inv.coefficients[e] += 1;
        // close the cycle through the tree: phi_e - (pot_t - pot_s)
        for (int j = 0; j < E; ++j) inv.coefficients[j] -= pot[t][j] - pot[s][j];
        double val = 0.0;
        std::ostringstream desc;
        bool first = true;
        for (int j = 0; j < E; ++j) {
            int c = inv.coefficients[j];
            if (c == 0) continue;
            val += c * phi.at_edge(j);
            auto [js, jx] = g.edges()[j];
            if (!first) desc << " ";
            desc << (c > 0 ? "+" : "-");
            if (std::abs(c) != 1) desc << std::abs(c) << "*";
            desc << "phi(" << g.alphabet()[jx] << "," << g.states()[js] << ")";
            first = false;
        }
        inv.value = mod_2pi(val);
        inv.description = desc.str();
        invariants.push_back(std::move(inv));
    }
    return invariants;
}

} // namespace qmemc
