#include "qmemc/oneshot.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "qmemc/entropy.hpp"
#include "qmemc/errors.hpp"

namespace qmemc {

namespace {

// ball constraint sqrt(1 - F) < eps, F = sum_i sqrt(p_i q_i). For a cut of
// mass m with proportional renormalization F = sqrt(1 - m), so the largest
// admissible cut mass is 1 - (1 - eps^2)^2.
double cut_budget(double eps) {
    double e2 = eps * eps;
    return 1.0 - (1.0 - e2) * (1.0 - e2);
}

double root_fidelity(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
    double f = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) f += std::sqrt(p[i] * q[i]);
    return f;
}

} // namespace

SpectrumSmoothing smooth_spectrum(const Eigen::VectorXd& spectrum, double eps,
                                  SmoothDirection direction) {
    if (eps < 0.0 || eps >= 1.0) {
        std::ostringstream ss;
        ss << "smooth_spectrum: eps " << eps << " outside [0, 1)";
        throw EpsilonOutOfRange(ss.str());
    }
    SpectrumSmoothing out;
    out.original = spectrum.cwiseMax(0.0);
    if (eps == 0.0) {
        out.smoothed = out.original;
        out.achieved_distance = 0.0;
        return out;
    }
    const Eigen::Index n = out.original.size();

    if (direction == SmoothDirection::max) {
        // zero the largest prefix of smallest entries with mass < budget
        std::vector<Eigen::Index> order(n);
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::sort(order.begin(), order.end(),
                  [&](Eigen::Index a, Eigen::Index b) { return out.original[a] < out.original[b]; });
        double budget = cut_budget(eps);
        double m = 0.0;
        Eigen::VectorXd q = out.original;
        for (Eigen::Index k = 0; k < n - 1; ++k) { // keep at least one entry
            double v = out.original[order[k]];
            if (m + v >= budget) break;
            m += v;
            q[order[k]] = 0.0;
        }
        q /= q.sum();
        out.smoothed = q;
    } else {
        // cap the largest entries at the smallest feasible threshold
        double lo = 0.0, hi = out.original.maxCoeff();
        auto dist_at = [&](double t) {
            Eigen::VectorXd q = out.original.cwiseMin(t);
            double S = q.sum();
            double f = root_fidelity(out.original, q) / std::sqrt(S);
            return std::sqrt(std::max(0.0, 1.0 - f));
        };
        for (int it = 0; it < 100; ++it) {
            double mid = 0.5 * (lo + hi);
            if (dist_at(mid) < eps)
                hi = mid;
            else
                lo = mid;
        }
        Eigen::VectorXd q = out.original.cwiseMin(hi);
        q /= q.sum();
        out.smoothed = q;
    }
    out.achieved_distance =
        std::sqrt(std::max(0.0, 1.0 - root_fidelity(out.original, out.smoothed)));
    return out;
}

std::pair<double, double> h_min_max_conditional_cq(const CqSpectra& cq) {
    double sum_min = 0.0, sum_max = 0.0, total = 0.0;
    for (Eigen::Index x = 0; x < cq.p_x.size(); ++x) {
        double px = cq.p_x[x];
        if (px <= 0.0) continue;
        total += px;
        const Eigen::VectorXd& spec = cq.conditional_spectra[x];
        if (spec.size() == 0) continue;
        double lmax = spec.maxCoeff();
        double trsqrt = spec.cwiseMax(0.0).cwiseSqrt().sum();
        sum_min += px * lmax;
        sum_max += px * trsqrt * trsqrt;
    }
    if (std::abs(total - 1.0) > 1e-10)
        throw NotNormalized("h_min_max_conditional_cq: symbol distribution not normalized");
    return {-std::log2(sum_min), std::log2(sum_max)};
}

namespace {

// joint spectrum of a cq state as (block, value) entries
struct JointEntry {
    int block;
    double value;
};

std::vector<JointEntry> joint_entries(const CqSpectra& cq) {
    std::vector<JointEntry> ent;
    for (Eigen::Index x = 0; x < cq.p_x.size(); ++x) {
        if (cq.p_x[x] <= 0.0) continue;
        for (Eigen::Index i = 0; i < cq.conditional_spectra[x].size(); ++i) {
            double v = cq.p_x[x] * std::max(0.0, cq.conditional_spectra[x][i]);
            if (v > 0.0) ent.push_back({static_cast<int>(x), v});
        }
    }
    return ent;
}

// capped joint spectrum inside the eps-ball; block structure is preserved, so
// the classical-conditioning closed form applies to the smoothed state
std::vector<JointEntry> cap_joint(const std::vector<JointEntry>& ent, double eps) {
    double hi = 0.0;
    for (const auto& e : ent) hi = std::max(hi, e.value);
    double lo = 0.0;
    auto dist_at = [&](double t) {
        double S = 0.0, F = 0.0;
        for (const auto& e : ent) {
            double q = std::min(e.value, t);
            S += q;
            F += std::sqrt(e.value * q);
        }
        return std::sqrt(std::max(0.0, 1.0 - F / std::sqrt(S)));
    };
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        if (dist_at(mid) < eps)
            hi = mid;
        else
            lo = mid;
    }
    std::vector<JointEntry> out = ent;
    double S = 0.0;
    for (auto& e : out) {
        e.value = std::min(e.value, hi);
        S += e.value;
    }
    for (auto& e : out) e.value /= S;
    return out;
}

// H_min[A|X] of a (possibly smoothed) joint-entry list
double h_min_cond_of(const std::vector<JointEntry>& ent) {
    // sum over blocks of the largest entry
    std::vector<double> best;
    for (const auto& e : ent) {
        if (e.block >= static_cast<int>(best.size())) best.resize(e.block + 1, 0.0);
        best[e.block] = std::max(best[e.block], e.value);
    }
    double s = 0.0;
    for (double v : best) s += v;
    return -std::log2(s);
}

} // namespace

OneShotReport single_shot_bound(const Generator& g, const StationaryDistribution& pi,
                                const OverlapMatrix& omega, double eps) {
    if (eps < 0.0 || eps >= 1.0)
        throw EpsilonOutOfRange("single_shot_bound: eps outside [0, 1)");

    Eigen::VectorXd rho_spec = memory_spectrum(omega, pi);
    CqSpectra cq = cq_spectra(g, pi, omega);

    OneShotReport r;
    r.epsilon = eps;
    if (eps == 0.0) {
        auto [hmin_s, hmax_s] = h_min_max_unconditional(rho_spec);
        (void)hmin_s;
        r.H_max_S_smooth = hmax_s;
        r.H_min_cond = h_min_max_conditional_cq(cq).first;
        Eigen::VectorXd px = cq.p_x;
        r.H_min_X = -std::log2(px.maxCoeff());
    } else {
        // budgets per Eq. (3): eps^2/4 for the memory term, eps^2/64 for the
        // conditional and symbol terms
        SpectrumSmoothing sm = smooth_spectrum(rho_spec, eps * eps / 4.0, SmoothDirection::max);
        r.H_max_S_smooth = 2.0 * std::log2(sm.smoothed.cwiseMax(0.0).cwiseSqrt().sum());

        auto ent = joint_entries(cq);
        auto capped = cap_joint(ent, eps * eps / 64.0);
        r.H_min_cond = h_min_cond_of(capped);

        SpectrumSmoothing smx = smooth_spectrum(cq.p_x, eps * eps / 64.0, SmoothDirection::min);
        r.H_min_X = -std::log2(smx.smoothed.maxCoeff());
    }
    r.bound_bits = r.H_max_S_smooth - r.H_min_cond - r.H_min_X;
    r.o_term_omitted = true;
    return r;
}

namespace {

// log-domain accumulator: log(sum of exp)
double logsumexp(const std::vector<double>& v) {
    if (v.empty()) return -std::numeric_limits<double>::infinity();
    double m = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

struct TypeClass {
    double log_count; // ln multiplicity
    double log_value; // ln per-eigenvalue probability
};

// type classes of p^(x)N, eigenvalue ascending
std::vector<TypeClass> type_classes(const Eigen::VectorXd& p, long N) {
    const int K = static_cast<int>(p.size());
    std::vector<TypeClass> cls;
    if (K == 1) {
        cls.push_back({0.0, 0.0});
    } else if (K == 2) {
        cls.reserve(N + 1);
        double l0 = std::log(p[0]), l1 = std::log(p[1]);
        for (long j = 0; j <= N; ++j) {
            double lc = std::lgamma(N + 1.0) - std::lgamma(j + 1.0) - std::lgamma(N - j + 1.0);
            cls.push_back({lc, j * l0 + (N - j) * l1});
        }
    } else {
        // compositions of N into K parts; guarded by caller
        std::vector<long> c(K, 0);
        std::vector<double> lp(K);
        for (int i = 0; i < K; ++i) lp[i] = std::log(p[i]);
        // iterative enumeration
        std::vector<long> idx(K - 1, 0);
        std::function<void(int, long)> rec = [&](int pos, long rem) {
            if (pos == K - 1) {
                c[pos] = rem;
                double lc = std::lgamma(N + 1.0);
                double lv = 0.0;
                for (int i = 0; i < K; ++i) {
                    lc -= std::lgamma(c[i] + 1.0);
                    lv += c[i] * lp[i];
                }
                cls.push_back({lc, lv});
                return;
            }
            for (long j = 0; j <= rem; ++j) {
                c[pos] = j;
                rec(pos + 1, rem - j);
            }
        };
        rec(0, N);
    }
    std::sort(cls.begin(), cls.end(),
              [](const TypeClass& a, const TypeClass& b) { return a.log_value < b.log_value; });
    return cls;
}

// certified H_max^eps upper bound per copy: greedy cut of smallest-eigenvalue
// mass (whole classes plus a partial boundary class), log domain throughout
double hmax_rate_bound(const std::vector<TypeClass>& cls, long N, double eps) {
    double budget = cut_budget(eps);
    double mcut = 0.0;
    size_t k = 0;
    while (k < cls.size()) {
        double mass = std::exp(cls[k].log_count + cls[k].log_value);
        if (mcut + mass >= budget) break;
        mcut += mass;
        ++k;
    }
    std::vector<double> kept; // ln(count * sqrt(value)) per class
    if (k < cls.size()) {
        // partial cut inside the boundary class; counts stay in log domain
        double rem = budget - mcut;
        double log_cnt_cut = std::log(rem) - cls[k].log_value;
        if (log_cnt_cut >= cls[k].log_count) {
            mcut += std::exp(cls[k].log_count + cls[k].log_value);
        } else {
            double log_kept_cnt;
            if (log_cnt_cut < 40.0) {
                double cnt = std::floor(std::exp(log_cnt_cut));
                mcut += cnt * std::exp(cls[k].log_value);
                double total = std::exp(cls[k].log_count);
                log_kept_cnt = std::log(total - cnt);
            } else {
                // astronomically many cut eigenvalues: within one eigenvalue
                // of the budget, kept count via log1p
                mcut = budget * (1.0 - 1e-12);
                log_kept_cnt =
                    cls[k].log_count + std::log1p(-std::exp(log_cnt_cut - cls[k].log_count));
            }
            if (std::isfinite(log_kept_cnt))
                kept.push_back(log_kept_cnt + 0.5 * cls[k].log_value);
        }
        for (size_t j = k + 1; j < cls.size(); ++j)
            kept.push_back(cls[j].log_count + 0.5 * cls[j].log_value);
    }
    double lnS = logsumexp(kept);
    double hmax = 2.0 * (lnS - 0.5 * std::log1p(-mcut)) / std::numbers::ln2;
    return hmax / static_cast<double>(N);
}

// certified H_min^eps lower bound per copy: cap large eigenvalues at the
// smallest feasible threshold (binary search over ln t)
double hmin_rate_bound(const std::vector<TypeClass>& cls, long N, double eps) {
    double lo = cls.front().log_value; // smallest eigenvalue
    double hi = cls.back().log_value;  // largest
    auto dist_at = [&](double logt) {
        std::vector<double> logS, logF;
        for (const auto& c : cls) {
            if (c.log_value <= logt) {
                logS.push_back(c.log_count + c.log_value);
                logF.push_back(c.log_count + c.log_value);
            } else {
                logS.push_back(c.log_count + logt);
                logF.push_back(c.log_count + 0.5 * (c.log_value + logt));
            }
        }
        double S = logsumexp(logS), F = logsumexp(logF);
        return std::sqrt(std::max(0.0, 1.0 - std::exp(F - 0.5 * S)));
    };
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (dist_at(mid) < eps)
            hi = mid;
        else
            lo = mid;
    }
    // H_min = -log2(t / S(t))
    std::vector<double> logS;
    for (const auto& c : cls)
        logS.push_back(c.log_count + std::min(c.log_value, hi));
    double S = logsumexp(logS);
    double hmin = -(hi - S) / std::numbers::ln2;
    return hmin / static_cast<double>(N);
}

} // namespace

AepPoint aep_check(const Eigen::VectorXd& p, long N, double eps) {
    if (eps <= 0.0 || eps >= 1.0)
        throw EpsilonOutOfRange("aep_check: eps outside (0, 1)");
    if (N < 1 || N > 100000) throw Error("aep_check: N outside [1, 1e5]");
    const int K = static_cast<int>(p.size());
    if (K == 0) throw NotNormalized("aep_check: empty distribution");
    shannon(p); // validates
    // composition count (N+1 choose K-1)-ish; keep enumeration tractable
    if (K > 2) {
        double classes = 1.0;
        for (int i = 1; i < K; ++i) classes *= static_cast<double>(N + i) / i;
        if (classes > 2e6)
            throw AlphabetTooLarge("aep_check: too many type classes for this alphabet and N");
    }

    auto cls = type_classes(p, N);
    AepPoint pt;
    pt.N = N;
    pt.epsilon = eps;
    pt.shannon = shannon(p);
    pt.hmax_rate = hmax_rate_bound(cls, N, eps);
    pt.hmin_rate = hmin_rate_bound(cls, N, eps);
    pt.gap = std::abs(pt.hmax_rate - pt.shannon);
    return pt;
}

ChainRuleProbe chain_rule_probe(const CqSpectra& cq, double delta, double slack) {
    if (delta <= 0.0 || delta >= 1.0)
        throw EpsilonOutOfRange("chain_rule_probe: delta outside (0, 1)");
    ChainRuleProbe pr;
    pr.meaningful = 4.0 * delta < 1.0;
    if (!pr.meaningful) return pr;

    auto ent = joint_entries(cq);
    Eigen::VectorXd joint(ent.size());
    for (size_t i = 0; i < ent.size(); ++i) joint[static_cast<Eigen::Index>(i)] = ent[i].value;

    // smoothed conditional H_max: cut small joint eigenvalues (max direction),
    // then apply the closed form blockwise
    auto cut = smooth_spectrum(joint, delta, SmoothDirection::max);
    {
        std::vector<double> block_sqr;
        for (size_t i = 0; i < ent.size(); ++i) {
            int b = ent[i].block;
            if (b >= static_cast<int>(block_sqr.size())) block_sqr.resize(b + 1, 0.0);
            block_sqr[b] += std::sqrt(cut.smoothed[static_cast<Eigen::Index>(i)]);
        }
        double s = 0.0;
        for (double v : block_sqr) s += v * v;
        pr.lhs_s5 = std::log2(s);
    }
    // H_max^{4 delta}[SX] and H_min^{delta}[X]
    auto joint_max = smooth_spectrum(joint, 4.0 * delta, SmoothDirection::max);
    double hmax_joint = 2.0 * std::log2(joint_max.smoothed.cwiseSqrt().sum());
    auto px_min = smooth_spectrum(cq.p_x, delta, SmoothDirection::min);
    double hmin_x = -std::log2(px_min.smoothed.maxCoeff());
    pr.rhs_s5 = hmax_joint - hmin_x + slack;
    pr.s5_satisfied = pr.lhs_s5 <= pr.rhs_s5;

    // smoothed conditional H_min: cap joint eigenvalues (min direction)
    auto capped = cap_joint(ent, delta);
    pr.lhs_s6 = h_min_cond_of(capped);
    auto joint_min = smooth_spectrum(joint, 4.0 * delta, SmoothDirection::min);
    double hmin_joint = -std::log2(joint_min.smoothed.maxCoeff());
    pr.rhs_s6 = hmin_joint - hmin_x + slack;
    pr.s6_satisfied = pr.lhs_s6 <= pr.rhs_s6;
    return pr;
}

} // namespace qmemc
