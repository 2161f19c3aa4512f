#include "qmemc/classical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "qmemc/entropy.hpp"
#include "qmemc/errors.hpp"

namespace qmemc {

ClassicalReport classical_report(const Generator& g, const StationaryDistribution& pi,
                                 const OrderOptions& opts) {
    if (!g.predictive()) throw NotPredictive("classical_report: h_mu closed form requires unifilarity");
    const int n = g.num_states();
    const int m = g.num_symbols();

    ClassicalReport r;
    r.C_mu = shannon(pi.pi);

    JointTable jt = joint_distribution(g, pi);
    Eigen::VectorXd px = jt.symbol_marginal();
    r.H_X = shannon(px);

    // N_mu = H[S'|X] from the joint table
    double HSpX = 0.0; // H[S'X]
    for (int sp = 0; sp < n; ++sp)
        for (int x = 0; x < m; ++x) {
            double v = 0.0;
            for (int s = 0; s < n; ++s) v += jt.at(sp, x, s);
            if (v > 0.0) HSpX -= v * std::log2(v);
        }
    r.N_mu = HSpX - r.H_X;

    // h_mu = sum_s pi(s) H[X|S=s], valid for predictive generators
    r.h_mu = 0.0;
    for (int s = 0; s < n; ++s) {
        double h = 0.0;
        for (int x = 0; x < m; ++x) {
            double v = g.prob(s, x);
            if (v > 0.0) h -= v * std::log2(v);
        }
        r.h_mu += pi.pi[s] * h;
    }

    r.W_mu = r.C_mu - r.N_mu - r.H_X;

    // internal identity checks: W_mu = -H[X|S'] and -h_mu <= W_mu <= 0
    double HXgSp = 0.0; // H[X|S'] = H[S'X] - H[S']
    HXgSp = HSpX - shannon(jt.next_state_marginal());
    if (std::abs(r.W_mu + HXgSp) > 1e-10)
        throw Error("classical_report: identity W_mu = -H[X|S'] violated");
    if (r.W_mu > 1e-10 || r.W_mu < -r.h_mu - 1e-10)
        throw Error("classical_report: -h_mu <= W_mu <= 0 violated");

    r.markov_order = markov_order(g, opts.markov_cap);
    r.cryptic_order = cryptic_order(g, opts.cryptic_cap, opts.horizon);
    return r;
}

namespace {

using StateSet = std::uint64_t; // bitmask; validated machines have <= 64 states

int popcount(StateSet s) { return static_cast<int>(__builtin_popcountll(s)); }

} // namespace

OrderResult markov_order(const Generator& g, int cap) {
    const int n = g.num_states();
    const int m = g.num_symbols();
    if (n > 64) throw Error("markov_order: more than 64 states unsupported");
    if (cap < 1) throw Error("markov_order: cap must be >= 1");

    StateSet full = (n == 64) ? ~StateSet{0} : ((StateSet{1} << n) - 1);
    if (popcount(full) == 1) return OrderResult::of(1);

    // images under each symbol; dead (empty) images mean the word is disallowed
    auto image = [&](StateSet S, int x) {
        StateSet out = 0;
        for (int s = 0; s < n; ++s)
            if ((S >> s) & 1) {
                if (!g.supported(s, x)) continue;
                if (g.predictive()) {
                    out |= StateSet{1} << g.successor(s, x);
                } else {
                    for (const auto& t : g.transitions())
                        if (t.from == s && t.symbol == x) out |= StateSet{1} << t.to;
                }
            }
        return out;
    };

    std::set<StateSet> seen{full};
    std::set<StateSet> frontier{full};
    for (int L = 1; L <= cap; ++L) {
        std::set<StateSet> next;
        for (StateSet S : frontier)
            for (int x = 0; x < m; ++x) {
                StateSet img = image(S, x);
                if (img == 0 || popcount(img) <= 1) continue; // disallowed or synchronized
                if (seen.count(img)) return OrderResult::capped(); // recurs: order infinite
                next.insert(img);
            }
        if (next.empty()) return OrderResult::of(L);
        seen.insert(next.begin(), next.end());
        frontier = std::move(next);
    }
    return OrderResult::capped();
}

namespace {

// pair-set automaton node: sorted (anchor, current) pairs, packed 16-bit
using PairSet = std::vector<std::uint16_t>;

struct PairSetLess {
    bool operator()(const PairSet& a, const PairSet& b) const { return a < b; }
};

int anchor_count(const PairSet& ps) {
    std::set<int> a;
    for (auto v : ps) a.insert(v >> 8);
    return static_cast<int>(a.size());
}

} // namespace

OrderResult cryptic_order(const Generator& g, int cap, int horizon) {
    const int n = g.num_states();
    const int m = g.num_symbols();
    if (n > 255) throw Error("cryptic_order: too many states");
    if (cap < 1) throw Error("cryptic_order: cap must be >= 1");
    if (horizon < cap) throw Error("cryptic_order: horizon must be >= cap");

    auto step = [&](const PairSet& ps, int x) {
        std::set<std::uint16_t> out;
        for (auto pv : ps) {
            int a = pv >> 8, c = pv & 0xff;
            if (!g.supported(c, x)) continue;
            if (g.predictive()) {
                out.insert(static_cast<std::uint16_t>((a << 8) | g.successor(c, x)));
            } else {
                for (const auto& t : g.transitions())
                    if (t.from == c && t.symbol == x)
                        out.insert(static_cast<std::uint16_t>((a << 8) | t.to));
            }
        }
        return PairSet(out.begin(), out.end());
    };

    for (int k = 1; k <= cap; ++k) {
        // phase 1: evolve (start, current) pairs for k steps from the diagonal
        std::set<PairSet, PairSetLess> level;
        {
            PairSet diag;
            for (int s = 0; s < n; ++s) diag.push_back(static_cast<std::uint16_t>((s << 8) | s));
            level.insert(diag);
        }
        for (int t = 0; t < k; ++t) {
            std::set<PairSet, PairSetLess> next;
            for (const auto& ps : level)
                for (int x = 0; x < m; ++x) {
                    PairSet q = step(ps, x);
                    if (!q.empty()) next.insert(std::move(q));
                }
            level = std::move(next);
        }
        // re-anchor: position after k symbols becomes the tracked anchor
        std::set<PairSet, PairSetLess> inits;
        for (const auto& ps : level) {
            std::set<std::uint16_t> re;
            for (auto pv : ps) {
                int c = pv & 0xff;
                re.insert(static_cast<std::uint16_t>((c << 8) | c));
            }
            inits.insert(PairSet(re.begin(), re.end()));
        }

        // phase 2: BFS closure of the pair-set automaton
        std::map<PairSet, int, PairSetLess> id;
        std::vector<PairSet> nodes;
        std::vector<std::vector<int>> adj;
        auto intern = [&](const PairSet& ps) {
            auto it = id.find(ps);
            if (it != id.end()) return it->second;
            int v = static_cast<int>(nodes.size());
            id.emplace(ps, v);
            nodes.push_back(ps);
            adj.emplace_back();
            return v;
        };
        std::vector<int> frontier;
        for (const auto& ps : inits) frontier.push_back(intern(ps));
        int depth = 0;
        size_t expanded_until = 0;
        while (expanded_until < nodes.size()) {
            if (++depth > horizon) {
                std::ostringstream ss;
                ss << "cryptic_order: pair-set automaton not closed within horizon "
                   << horizon << " (" << nodes.size() << " feasible sets so far)";
                throw HorizonInconclusive(ss.str());
            }
            size_t end = nodes.size();
            for (size_t vi = expanded_until; vi < end; ++vi) {
                for (int x = 0; x < m; ++x) {
                    PairSet q = step(nodes[vi], x);
                    if (q.empty()) continue;
                    int w = intern(q); // may reallocate nodes/adj
                    adj[vi].push_back(w);
                }
            }
            expanded_until = end;
        }

        // bad for this k: a pair-set with >= 2 anchors lying on a cycle;
        // such a cycle pumps an infinite word whose surviving trajectories
        // keep distinct time-k positions forever
        const int V = static_cast<int>(nodes.size());
        std::vector<int> index(V, -1), low(V, 0), comp(V, -1);
        std::vector<bool> onstack(V, false);
        std::vector<int> stk;
        int next_index = 0, ncomp = 0;
        std::vector<int> comp_size;
        struct Frame { int v; size_t ei; };
        for (int root = 0; root < V; ++root) {
            if (index[root] != -1) continue;
            std::vector<Frame> call{{root, 0}};
            index[root] = low[root] = next_index++;
            stk.push_back(root);
            onstack[root] = true;
            while (!call.empty()) {
                Frame& f = call.back();
                if (f.ei < adj[f.v].size()) {
                    int w = adj[f.v][f.ei++];
                    if (index[w] == -1) {
                        index[w] = low[w] = next_index++;
                        stk.push_back(w);
                        onstack[w] = true;
                        call.push_back({w, 0});
                    } else if (onstack[w]) {
                        low[f.v] = std::min(low[f.v], index[w]);
                    }
                } else {
                    if (low[f.v] == index[f.v]) {
                        int size = 0;
                        while (true) {
                            int w = stk.back();
                            stk.pop_back();
                            onstack[w] = false;
                            comp[w] = ncomp;
                            ++size;
                            if (w == f.v) break;
                        }
                        comp_size.push_back(size);
                        ++ncomp;
                    }
                    int v = f.v;
                    call.pop_back();
                    if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
                }
            }
        }
        bool bad = false;
        for (int v = 0; v < V && !bad; ++v) {
            if (anchor_count(nodes[v]) < 2) continue;
            bool on_cycle = comp_size[comp[v]] > 1;
            if (!on_cycle)
                for (int w : adj[v])
                    if (w == v) on_cycle = true;
            if (on_cycle) bad = true;
        }
        if (!bad) return OrderResult::of(k);
    }
    return OrderResult::capped();
}

} // namespace qmemc
