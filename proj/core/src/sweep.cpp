#include "qmemc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "qmemc/errors.hpp"
#include "qmemc/machine_io.hpp"
#include "qmemc/rng.hpp"

namespace qmemc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<bool> tree_edge_mask(const Generator& g) {
    // mirrors the spanning-tree choice in loop_invariants: BFS from state 0
    const int n = g.num_states();
    const int E = static_cast<int>(g.edges().size());
    std::vector<bool> in_tree(E, false), visited(n, false);
    std::vector<int> queue{0};
    visited[0] = true;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int v = queue[qi];
        for (int e = 0; e < E; ++e) {
            auto [s, x] = g.edges()[e];
            int t = g.successor(s, x);
            if (s == t) continue;
            if ((s == v && !visited[t]) || (t == v && !visited[s])) {
                int w = (s == v) ? t : s;
                visited[w] = true;
                in_tree[e] = true;
                queue.push_back(w);
            }
        }
    }
    return in_tree;
}

} // namespace

std::vector<PhaseAssignment> sample_phases(const Generator& g, int n, std::uint64_t seed,
                                           bool gauge_reduced) {
    if (n < 1) throw Error("sample_phases: n must be >= 1");
    const int E = static_cast<int>(g.edges().size());
    std::vector<bool> tree;
    if (gauge_reduced) tree = tree_edge_mask(g);
    std::vector<PhaseAssignment> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        RandomStream rs = RandomStream::keyed(seed, static_cast<std::uint64_t>(i));
        std::vector<double> v(E);
        for (int e = 0; e < E; ++e) {
            double u = rs.next_double(kTwoPi);
            v[e] = (gauge_reduced && tree[e]) ? 0.0 : u;
        }
        out.push_back(PhaseAssignment::from_edge_values(g, std::move(v)));
    }
    return out;
}

namespace {

SweepRecord evaluate_one(const Generator& g, const StationaryDistribution& pi, int index,
                         const PhaseAssignment& phi, const OverlapOptions& solver) {
    SweepRecord rec;
    rec.sample = index;
    rec.phases = phi.values();
    try {
        OverlapMatrix omega = solve_overlaps(g, phi, solver);
        QuantumReport q = quantum_report(g, pi, omega);
        rec.delta_c = q.Delta_C;
        rec.delta_w = q.Delta_W;
        rec.c_q = q.C_q;
        rec.n_q = q.N_q;
        rec.w_q = q.W_q;
        rec.e_q = q.e_q;
    } catch (const NoConvergence&) {
        rec.status = "no-convergence";
    }
    return rec;
}

} // namespace

std::vector<SweepRecord> sweep(const Generator& g, int n, std::uint64_t seed,
                               const SweepOptions& opts) {
    StationaryDistribution pi = stationary(g);
    std::vector<PhaseAssignment> phases = sample_phases(g, n, seed, opts.gauge_reduced);
    std::vector<SweepRecord> records(n);

    int workers = std::max(1, opts.workers);
    if (workers == 1) {
        for (int i = 0; i < n; ++i)
            records[i] = evaluate_one(g, pi, i, phases[i], opts.solver);
    } else {
        std::atomic<int> next{0};
        auto worker = [&]() {
            while (true) {
                int i = next.fetch_add(1);
                if (i >= n) break;
                records[i] = evaluate_one(g, pi, i, phases[i], opts.solver);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return records;
}

ChartHistogram chart(const std::vector<SweepRecord>& records, int bins) {
    if (bins < 1) throw Error("chart: bins must be >= 1");
    std::vector<const SweepRecord*> ok;
    for (const auto& r : records)
        if (r.ok()) ok.push_back(&r);
    if (ok.empty()) throw NoSuccessfulRecords("chart: no successful records");

    double xmin = ok.front()->delta_c, xmax = xmin;
    double ymin = ok.front()->delta_w, ymax = ymin;
    for (const auto* r : ok) {
        xmin = std::min(xmin, r->delta_c);
        xmax = std::max(xmax, r->delta_c);
        ymin = std::min(ymin, r->delta_w);
        ymax = std::max(ymax, r->delta_w);
    }
    // expand 1% (and break zero-width ranges so edges stay strictly increasing)
    auto expand = [](double& lo, double& hi) {
        double w = hi - lo;
        double pad = (w > 0.0) ? 0.01 * w : std::max(1e-12, 1e-9 * std::abs(lo));
        lo -= pad;
        hi += pad;
    };
    expand(xmin, xmax);
    expand(ymin, ymax);

    ChartHistogram h;
    h.bins_x = h.bins_y = bins;
    h.x_edges.resize(bins + 1);
    h.y_edges.resize(bins + 1);
    for (int i = 0; i <= bins; ++i) {
        h.x_edges[i] = xmin + (xmax - xmin) * i / bins;
        h.y_edges[i] = ymin + (ymax - ymin) * i / bins;
    }
    h.counts.assign(static_cast<size_t>(bins) * bins, 0);
    for (const auto* r : ok) {
        int ix = std::min(bins - 1, static_cast<int>((r->delta_c - xmin) / (xmax - xmin) * bins));
        int iy = std::min(bins - 1, static_cast<int>((r->delta_w - ymin) / (ymax - ymin) * bins));
        ++h.counts[static_cast<size_t>(ix) * bins + iy];
        ++h.total;
    }
    return h;
}

SweepRecord optimize_efficiency(const Generator& g, int budget, std::uint64_t seed,
                                const SweepOptions& opts) {
    if (budget < 1) throw Error("optimize_efficiency: budget must be >= 1");
    StationaryDistribution pi = stationary(g);

    auto eq_of = [&](const PhaseAssignment& phi) -> std::optional<double> {
        try {
            OverlapMatrix omega = solve_overlaps(g, phi, opts.solver);
            QuantumReport q = quantum_report(g, pi, omega);
            if (q.Delta_C > 1e-6 && q.e_q) return q.e_q;
        } catch (const NoConvergence&) {
        }
        return std::nullopt;
    };

    std::vector<PhaseAssignment> candidates = sample_phases(g, budget, seed, opts.gauge_reduced);
    std::optional<double> best;
    int best_idx = -1;
    for (int i = 0; i < budget; ++i) {
        auto v = eq_of(candidates[i]);
        if (v && (!best || *v > *best)) {
            best = v;
            best_idx = i;
        }
    }
    if (!best)
        throw NoCompressiveImplementation(
            "optimize_efficiency: no sample with Delta_C > 1e-6 in the budget");

    // golden-section refinement on each coordinate, two passes
    std::vector<double> phi = candidates[best_idx].values();
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int pass = 0; pass < 2; ++pass) {
        for (size_t e = 0; e < phi.size(); ++e) {
            double a = 0.0, b = kTwoPi;
            auto value_at = [&](double t) {
                std::vector<double> v = phi;
                v[e] = t;
                auto r = eq_of(PhaseAssignment::from_edge_values(g, std::move(v)));
                return r ? *r : -std::numeric_limits<double>::infinity();
            };
            double c = b - gr * (b - a), d = a + gr * (b - a);
            double fc = value_at(c), fd = value_at(d);
            for (int it = 0; it < 40; ++it) {
                if (fc > fd) {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - gr * (b - a);
                    fc = value_at(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + gr * (b - a);
                    fd = value_at(d);
                }
            }
            double t = 0.5 * (a + b);
            if (value_at(t) >= *best) {
                phi[e] = t;
                best = value_at(t);
            }
        }
    }

    PhaseAssignment refined = PhaseAssignment::from_edge_values(g, std::move(phi));
    SweepRecord rec = evaluate_one(g, pi, best_idx, refined, opts.solver);
    if (!rec.ok() || !rec.e_q)
        throw NoCompressiveImplementation("optimize_efficiency: refinement lost compressiveness");
    return rec;
}

std::string sweep_csv(const Generator& g, const std::vector<SweepRecord>& records) {
    std::ostringstream out;
    out << "sample";
    for (size_t e = 0; e < g.edges().size(); ++e) out << ",phi_" << e;
    out << ",delta_c,delta_w,e_q,c_q,n_q,w_q,status\n";
    for (const auto& r : records) {
        out << r.sample;
        for (double v : r.phases) out << ',' << format_double(v);
        if (r.ok()) {
            out << ',' << format_double(r.delta_c) << ',' << format_double(r.delta_w) << ','
                << (r.e_q ? format_double(*r.e_q) : "nan") << ',' << format_double(r.c_q) << ','
                << format_double(r.n_q) << ',' << format_double(r.w_q);
        } else {
            out << ",nan,nan,nan,nan,nan,nan";
        }
        out << ',' << r.status << '\n';
    }
    return out.str();
}

std::string histogram_csv(const ChartHistogram& h) {
    std::ostringstream out;
    out << "bin_x_lo,bin_x_hi,bin_y_lo,bin_y_hi,count\n";
    for (int ix = 0; ix < h.bins_x; ++ix)
        for (int iy = 0; iy < h.bins_y; ++iy)
            out << format_double(h.x_edges[ix]) << ',' << format_double(h.x_edges[ix + 1]) << ','
                << format_double(h.y_edges[iy]) << ',' << format_double(h.y_edges[iy + 1]) << ','
                << h.at(ix, iy) << '\n';
    return out.str();
}

std::string chart_svg(const std::vector<SweepRecord>& records, const ChartHistogram& h) {
    const int W = 640, H = 480, ml = 70, mr = 20, mt = 20, mb = 50;
    const double xmin = h.x_edges.front(), xmax = h.x_edges.back();
    const double ymin = h.y_edges.front(), ymax = h.y_edges.back();
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

    long cmax = 1;
    for (long c : h.counts) cmax = std::max(cmax, c);
    // low density blue -> high density yellow
    auto color = [&](long c) {
        double t = std::log1p(static_cast<double>(c)) / std::log1p(static_cast<double>(cmax));
        int rr = static_cast<int>(30 + 225 * t);
        int gg = static_cast<int>(60 + 195 * t);
        int bb = static_cast<int>(180 - 140 * t);
        std::ostringstream ss;
        ss << "rgb(" << rr << ',' << gg << ',' << bb << ")";
        return ss.str();
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // density cells
    for (int ix = 0; ix < h.bins_x; ++ix)
        for (int iy = 0; iy < h.bins_y; ++iy) {
            long c = h.at(ix, iy);
            if (c == 0) continue;
            double x0 = px(h.x_edges[ix]), x1 = px(h.x_edges[ix + 1]);
            double y0 = py(h.y_edges[iy + 1]), y1 = py(h.y_edges[iy]);
            svg << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << x1 - x0
                << "\" height=\"" << y1 - y0 << "\" fill=\"" << color(c) << "\"/>\n";
        }
    // axes with ticks
    svg << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
        << H - mb << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double xv = xmin + (xmax - xmin) * i / 4, yv = ymin + (ymax - ymin) * i / 4;
        svg << "<line x1=\"" << px(xv) << "\" y1=\"" << H - mb << "\" x2=\"" << px(xv)
            << "\" y2=\"" << H - mb + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << px(xv) << "\" y=\"" << H - mb + 18
            << "\" font-size=\"10\" text-anchor=\"middle\">" << format_double(xv) << "</text>\n";
        svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << ml << "\" y2=\""
            << py(yv) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 3
            << "\" font-size=\"10\" text-anchor=\"end\">" << format_double(yv) << "</text>\n";
    }
    svg << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
        << "\" font-size=\"12\" text-anchor=\"middle\">delta_c (bits)</text>\n";
    svg << "<text x=\"14\" y=\"" << (mt + H - mb) / 2
        << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
        << (mt + H - mb) / 2 << ")\">delta_w (k_B T ln 2)</text>\n";
    (void)records;
    svg << "</svg>\n";
    return svg.str();
}

} // namespace qmemc
