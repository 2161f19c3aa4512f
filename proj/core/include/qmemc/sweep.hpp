// sweep.hpp — seeded phase sampling, parallel report evaluation, W/C-chart
// aggregation, and an extremal-efficiency search
//
// Determinism contract: sample phases are derived counter-based per index, so
// the record list (and the CSV written from it) is byte-identical for any
// worker count.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmemc/generator.hpp"
#include "qmemc/quantum.hpp"

namespace qmemc {

// iid uniform [0, 2pi) phase per supported edge. gauge_reduced samples only
// the loop-invariant directions: tree-edge phases are pinned to zero, so each
// fundamental-cycle invariant is itself uniform.
std::vector<PhaseAssignment> sample_phases(const Generator& g, int n, std::uint64_t seed,
                                           bool gauge_reduced = false);

struct SweepRecord {
    int sample{0};
    std::vector<double> phases;
    double delta_c{0.0};
    double delta_w{0.0};
    double c_q{0.0};
    double n_q{0.0};
    double w_q{0.0};
    std::optional<double> e_q;
    std::string status{"ok"}; // "ok" or the error tag of a failed solve
    bool ok() const { return status == "ok"; }
};

struct SweepOptions {
    int workers{1};
    bool gauge_reduced{false};
    OverlapOptions solver{};
};

// n records in sample order regardless of worker count; failed solves are
// retained with their error tag rather than dropped.
std::vector<SweepRecord> sweep(const Generator& g, int n, std::uint64_t seed,
                               const SweepOptions& opts = {});

struct ChartHistogram {
    int bins_x{0}, bins_y{0};
    std::vector<double> x_edges, y_edges; // strictly increasing, size bins+1
    std::vector<long> counts;             // row-major, x-major
    long total{0};

    long at(int ix, int iy) const { return counts[static_cast<size_t>(ix) * bins_y + iy]; }
};

// equal-width bins spanning the observed (delta_c, delta_w) ranges expanded
// by 1%; throws NoSuccessfulRecords when no record is usable
ChartHistogram chart(const std::vector<SweepRecord>& records, int bins);

// random search over the budget followed by two passes of golden-section
// refinement on each phase coordinate; returns the max-e_q record among
// compressive samples (Delta_C > 1e-6). Deterministic for a fixed seed.
SweepRecord optimize_efficiency(const Generator& g, int budget, std::uint64_t seed,
                                const SweepOptions& opts = {});

// CSV: sample,phi_0,...,phi_m,delta_c,delta_w,e_q,c_q,n_q,w_q,status
std::string sweep_csv(const Generator& g, const std::vector<SweepRecord>& records);
// CSV: bin_x_lo,bin_x_hi,bin_y_lo,bin_y_hi,count
std::string histogram_csv(const ChartHistogram& h);
// standalone SVG scatter colored by bin density
std::string chart_svg(const std::vector<SweepRecord>& records, const ChartHistogram& h);

} // namespace qmemc
