#include "qmemc/generator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "qmemc/errors.hpp"
#include "qmemc/rng.hpp"

namespace qmemc {

namespace {

// strongly connected components of the support graph (iterative Tarjan);
// returns component id per state, ids in reverse topological order
int tarjan_scc(int n, const std::vector<std::vector<int>>& adj, std::vector<int>& comp) {
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> onstack(n, false);
    std::vector<int> stack;
    comp.assign(n, -1);
    int next_index = 0, ncomp = 0;

    struct Frame { int v; size_t ei; };
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        onstack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.ei < adj[f.v].size()) {
                int w = adj[f.v][f.ei++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    onstack[w] = true;
                    call.push_back({w, 0});
                } else if (onstack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        onstack[w] = false;
                        comp[w] = ncomp;
                        if (w == f.v) break;
                    }
                    ++ncomp;
                }
                int v = f.v;
                call.pop_back();
                if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
        }
    }
    return ncomp;
}

} // namespace

Generator Generator::validate(const RawMachine& raw) {
    if (raw.states.empty()) throw Error("validate: machine has no states");
    if (raw.alphabet.empty()) throw Error("validate: machine has no alphabet");

    std::map<std::string, int> sidx, aidx;
    for (size_t i = 0; i < raw.states.size(); ++i) {
        if (!sidx.emplace(raw.states[i], static_cast<int>(i)).second)
            throw Error("validate: duplicate state label '" + raw.states[i] + "'");
    }
    for (size_t i = 0; i < raw.alphabet.size(); ++i) {
        if (!aidx.emplace(raw.alphabet[i], static_cast<int>(i)).second)
            throw Error("validate: duplicate symbol label '" + raw.alphabet[i] + "'");
    }

    Generator g;
    g.states_ = raw.states;
    g.alphabet_ = raw.alphabet;
    const int n = g.num_states();
    const int m = g.num_symbols();

    std::set<std::tuple<int, int, int>> seen;
    for (const auto& e : raw.transitions) {
        auto is = sidx.find(e.from);
        auto it = sidx.find(e.to);
        auto ix = aidx.find(e.symbol);
        if (is == sidx.end()) throw Error("validate: unknown state '" + e.from + "'");
        if (it == sidx.end()) throw Error("validate: unknown state '" + e.to + "'");
        if (ix == aidx.end()) throw Error("validate: unknown symbol '" + e.symbol + "'");
        if (e.p < 0.0) {
            std::ostringstream ss;
            ss << "validate: negative probability " << e.p << " on (" << e.from << ", "
               << e.symbol << ", " << e.to << ")";
            throw NegativeProbability(ss.str());
        }
        if (!seen.emplace(is->second, ix->second, it->second).second) {
            throw DuplicateEdge("validate: duplicate edge (" + e.from + ", " + e.symbol +
                                ", " + e.to + ")");
        }
        if (e.p > kProbEps)
            g.transitions_.push_back({is->second, ix->second, it->second, e.p});
    }

    // row sums
    std::vector<double> rowsum(n, 0.0);
    for (const auto& t : g.transitions_) rowsum[t.from] += t.p;
    for (int s = 0; s < n; ++s) {
        if (std::abs(rowsum[s] - 1.0) > 1e-12) {
            std::ostringstream ss;
            ss << "validate: outgoing probabilities at state '" << g.states_[s]
               << "' sum to " << rowsum[s] << " (deficit " << 1.0 - rowsum[s] << ")";
            throw RowSumMismatch(ss.str());
        }
    }

    // emission table, unifilarity, successor map
    g.emit_prob_.assign(static_cast<size_t>(n) * m, 0.0);
    g.successor_.assign(static_cast<size_t>(n) * m, -1);
    g.predictive_ = true;
    std::vector<int> targets(static_cast<size_t>(n) * m, 0);
    for (const auto& t : g.transitions_) {
        size_t k = static_cast<size_t>(t.from) * m + t.symbol;
        g.emit_prob_[k] += t.p;
        g.successor_[k] = t.to;
        if (++targets[k] > 1) g.predictive_ = false;
    }
    if (!g.predictive_)
        std::fill(g.successor_.begin(), g.successor_.end(), -1);

    // irreducibility of the support graph
    std::vector<std::vector<int>> adj(n);
    for (const auto& t : g.transitions_) adj[t.from].push_back(t.to);
    std::vector<int> comp;
    int ncomp = tarjan_scc(n, adj, comp);
    if (ncomp != 1) {
        // report one nontrivial component for diagnosis
        std::ostringstream ss;
        ss << "validate: support graph is not strongly connected (" << ncomp
           << " components; states";
        for (int s = 0; s < n; ++s)
            if (comp[s] == comp[0]) ss << " '" << g.states_[s] << "'";
        ss << " form one component)";
        throw NotIrreducible(ss.str());
    }

    // supported edge enumeration, state-major then symbol order
    g.edge_lookup_.assign(static_cast<size_t>(n) * m, -1);
    for (int s = 0; s < n; ++s)
        for (int x = 0; x < m; ++x)
            if (g.emit_prob_[static_cast<size_t>(s) * m + x] > kProbEps) {
                g.edge_lookup_[static_cast<size_t>(s) * m + x] = static_cast<int>(g.edges_.size());
                g.edges_.emplace_back(s, x);
            }
    return g;
}

int Generator::successor(int s, int x) const {
    if (!predictive_) throw NotPredictive("successor: generator is not predictive");
    return successor_[static_cast<size_t>(s) * alphabet_.size() + x];
}

Eigen::MatrixXd Generator::transition_matrix() const {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(num_states(), num_states());
    for (const auto& t : transitions_) T(t.from, t.to) += t.p;
    return T;
}

int Generator::state_index(const std::string& label) const {
    auto it = std::find(states_.begin(), states_.end(), label);
    if (it == states_.end()) throw Error("unknown state '" + label + "'");
    return static_cast<int>(it - states_.begin());
}

int Generator::symbol_index(const std::string& label) const {
    auto it = std::find(alphabet_.begin(), alphabet_.end(), label);
    if (it == alphabet_.end()) throw Error("unknown symbol '" + label + "'");
    return static_cast<int>(it - alphabet_.begin());
}

RawMachine Generator::to_raw() const {
    RawMachine raw;
    raw.states = states_;
    raw.alphabet = alphabet_;
    for (const auto& t : transitions_)
        raw.transitions.push_back({states_[t.from], alphabet_[t.symbol], states_[t.to], t.p});
    return raw;
}

StationaryDistribution stationary(const Generator& g) {
    const int n = g.num_states();
    Eigen::MatrixXd T = g.transition_matrix();

    auto residual_of = [&](const Eigen::VectorXd& pi) {
        return (T.transpose() * pi - pi).cwiseAbs().maxCoeff();
    };

    // (T^T - I) pi = 0 with last row replaced by the normalization constraint
    Eigen::MatrixXd A = T.transpose() - Eigen::MatrixXd::Identity(n, n);
    A.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b[n - 1] = 1.0;
    Eigen::VectorXd pi = A.colPivHouseholderQr().solve(b);

    bool ok = pi.allFinite() && pi.minCoeff() > -1e-12;
    if (ok) {
        pi = pi.cwiseMax(0.0);
        pi /= pi.sum();
        ok = residual_of(pi) <= 1e-10;
    }
    if (!ok) {
        // power iteration fallback for conditioning failures
        pi = Eigen::VectorXd::Constant(n, 1.0 / n);
        double res = residual_of(pi);
        for (long it = 0; it < 1000000 && res > 1e-14; ++it) {
            pi = T.transpose() * pi;
            pi /= pi.sum();
            res = residual_of(pi);
        }
        if (res > 1e-10) {
            std::ostringstream ss;
            ss << "stationary: no convergence (residual " << res << ")";
            throw NoConvergence(ss.str());
        }
    }
    return {pi, residual_of(pi)};
}

Eigen::VectorXd JointTable::symbol_marginal() const {
    Eigen::VectorXd px = Eigen::VectorXd::Zero(num_symbols);
    for (int sp = 0; sp < num_states; ++sp)
        for (int x = 0; x < num_symbols; ++x)
            for (int s = 0; s < num_states; ++s) px[x] += at(sp, x, s);
    return px;
}

Eigen::VectorXd JointTable::next_state_marginal() const {
    Eigen::VectorXd psp = Eigen::VectorXd::Zero(num_states);
    for (int sp = 0; sp < num_states; ++sp)
        for (int x = 0; x < num_symbols; ++x)
            for (int s = 0; s < num_states; ++s) psp[sp] += at(sp, x, s);
    return psp;
}

JointTable joint_distribution(const Generator& g, const StationaryDistribution& pi) {
    JointTable jt;
    jt.num_states = g.num_states();
    jt.num_symbols = g.num_symbols();
    jt.p.assign(static_cast<size_t>(jt.num_states) * jt.num_symbols * jt.num_states, 0.0);
    for (const auto& t : g.transitions())
        jt.at(t.to, t.symbol, t.from) += t.p * pi.pi[t.from];
    return jt;
}

Generator minimize(const Generator& g) {
    if (!g.predictive()) throw NotPredictive("minimize: generator is not predictive");
    const int n = g.num_states();
    const int m = g.num_symbols();
    constexpr double tol = 1e-9;

    std::vector<int> block(n, 0);
    int nblocks = 1;
    for (int round = 0; round < n; ++round) {
        // states are equivalent in the refined partition when their emission
        // rows agree within tol and successors land in the same blocks
        auto same = [&](int a, int b) {
            if (block[a] != block[b]) return false;
            for (int x = 0; x < m; ++x) {
                double pa = g.prob(a, x), pb = g.prob(b, x);
                if (std::abs(pa - pb) > tol) return false;
                bool sa = pa > kProbEps, sb = pb > kProbEps;
                if (sa != sb) return false;
                if (sa && block[g.successor(a, x)] != block[g.successor(b, x)]) return false;
            }
            return true;
        };
        std::vector<int> nb(n, -1);
        int cnt = 0;
        for (int s = 0; s < n; ++s) {
            if (nb[s] != -1) continue;
            nb[s] = cnt;
            for (int t = s + 1; t < n; ++t)
                if (nb[t] == -1 && same(s, t)) nb[t] = cnt;
            ++cnt;
        }
        if (cnt == nblocks && nb == block) break;
        block = std::move(nb);
        nblocks = cnt;
    }

    if (nblocks == n) return g; // already minimal, same partition

    // quotient machine; block representative = first declared member
    std::vector<int> rep(nblocks, -1);
    for (int s = 0; s < n; ++s)
        if (rep[block[s]] == -1) rep[block[s]] = s;

    RawMachine raw;
    raw.alphabet = g.alphabet();
    for (int b = 0; b < nblocks; ++b) raw.states.push_back(g.states()[rep[b]]);
    for (int b = 0; b < nblocks; ++b) {
        int s = rep[b];
        for (int x = 0; x < m; ++x)
            if (g.supported(s, x))
                raw.transitions.push_back({raw.states[b], g.alphabet()[x],
                                           raw.states[block[g.successor(s, x)]], g.prob(s, x)});
    }
    return Generator::validate(raw);
}

std::vector<std::vector<int>> sample_words(const Generator& g,
                                           const StationaryDistribution& pi,
                                           int length, int count, std::uint64_t seed) {
    const int n = g.num_states();
    const int m = g.num_symbols();
    // cumulative tables for inverse-cdf draws
    std::vector<double> cum_pi(n);
    double acc = 0.0;
    for (int s = 0; s < n; ++s) {
        acc += pi.pi[s];
        cum_pi[s] = acc;
    }
    struct Branch { double cum; int symbol; int to; };
    std::vector<std::vector<Branch>> branches(n);
    for (int s = 0; s < n; ++s) {
        double c = 0.0;
        for (int x = 0; x < m; ++x)
            if (g.supported(s, x)) {
                // non-predictive machines can have several targets per symbol
                for (const auto& t : g.transitions())
                    if (t.from == s && t.symbol == x) {
                        c += t.p;
                        branches[s].push_back({c, x, t.to});
                    }
            }
    }

    std::vector<std::vector<int>> words;
    words.reserve(count);
    for (int i = 0; i < count; ++i) {
        RandomStream rs = RandomStream::keyed(seed, static_cast<std::uint64_t>(i));
        double u = rs.next_double();
        int s = static_cast<int>(std::lower_bound(cum_pi.begin(), cum_pi.end(), u) - cum_pi.begin());
        if (s >= n) s = n - 1;
        std::vector<int> w(length);
        for (int t = 0; t < length; ++t) {
            double v = rs.next_double() * branches[s].back().cum;
            auto it = std::lower_bound(branches[s].begin(), branches[s].end(), v,
                                       [](const Branch& b, double val) { return b.cum < val; });
            if (it == branches[s].end()) --it;
            w[t] = it->symbol;
            s = it->to;
        }
        words.push_back(std::move(w));
    }
    return words;
}

} // namespace qmemc
