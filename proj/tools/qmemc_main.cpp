// qmemc — memory and thermodynamic costs of classical and quantum
// implementations of finite stochastic-process generators
//
// Exit codes: 0 success, 2 input error, 3 numerical failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qmemc/classical.hpp"
#include "qmemc/entropy.hpp"
#include "qmemc/errors.hpp"
#include "qmemc/families.hpp"
#include "qmemc/generator.hpp"
#include "qmemc/machine_io.hpp"
#include "qmemc/oneshot.hpp"
#include "qmemc/quantum.hpp"
#include "qmemc/sweep.hpp"
#include "qmemc/version.hpp"

namespace {

using nlohmann::json;
using namespace qmemc;

constexpr double kBoltzmannJPerK = 1.380649e-23; // SI-defined
constexpr double kLn2 = 0.6931471805599453;

struct ExitCode {
    static constexpr int ok = 0;
    static constexpr int input = 2;
    static constexpr int numeric = 3;
};

struct CliFailure : std::runtime_error {
    int code;
    std::string tag;
    CliFailure(int c, std::string t, const std::string& msg)
        : std::runtime_error(msg), code(c), tag(std::move(t)) {}
};

std::string error_tag(const Error& e) {
    if (dynamic_cast<const NegativeProbability*>(&e)) return "NegativeProbability";
    if (dynamic_cast<const RowSumMismatch*>(&e)) return "RowSumMismatch";
    if (dynamic_cast<const NotIrreducible*>(&e)) return "NotIrreducible";
    if (dynamic_cast<const DuplicateEdge*>(&e)) return "DuplicateEdge";
    if (dynamic_cast<const NotPredictive*>(&e)) return "NotPredictive";
    if (dynamic_cast<const NotNormalized*>(&e)) return "NotNormalized";
    if (dynamic_cast<const NoConvergence*>(&e)) return "NoConvergence";
    if (dynamic_cast<const DimensionMismatch*>(&e)) return "DimensionMismatch";
    if (dynamic_cast<const EpsilonOutOfRange*>(&e)) return "EpsilonOutOfRange";
    if (dynamic_cast<const HorizonInconclusive*>(&e)) return "HorizonInconclusive";
    if (dynamic_cast<const ParameterOutOfRange*>(&e)) return "ParameterOutOfRange";
    if (dynamic_cast<const NotMinimal*>(&e)) return "NotMinimal";
    if (dynamic_cast<const AlphabetTooLarge*>(&e)) return "AlphabetTooLarge";
    if (dynamic_cast<const NoSuccessfulRecords*>(&e)) return "NoSuccessfulRecords";
    if (dynamic_cast<const NoCompressiveImplementation*>(&e)) return "NoCompressiveImplementation";
    return "Error";
}

int error_exit_code(const Error& e) {
    if (dynamic_cast<const NoConvergence*>(&e) || dynamic_cast<const NoSuccessfulRecords*>(&e) ||
        dynamic_cast<const NoCompressiveImplementation*>(&e) ||
        dynamic_cast<const HorizonInconclusive*>(&e))
        return ExitCode::numeric;
    return ExitCode::input;
}

// ------------------------------ machine source ------------------------------

struct MachineSource {
    std::string file;
    std::string family;
    int R{1}, k{1};
    double p{0.5}, q{0.2}, r{0.4};
    std::string matrix_file;

    void add_options(CLI::App* cmd, bool positional = true) {
        if (positional) cmd->add_option("machine", file, "machine JSON file");
        cmd->add_option("--family", family,
                        "family: golden-mean | nemo | two-step-erase | markov");
        cmd->add_option("--R", R, "Golden-Mean Markov-part length");
        cmd->add_option("--k", k, "Golden-Mean cryptic-part length");
        cmd->add_option("--p", p, "family parameter p");
        cmd->add_option("--q", q, "family parameter q");
        cmd->add_option("--r", r, "family parameter r");
        cmd->add_option("--matrix", matrix_file, "row-stochastic matrix JSON (markov family)");
    }

    Generator resolve() const {
        if (!file.empty() && !family.empty())
            throw CliFailure(ExitCode::input, "AmbiguousSource",
                             "give either a machine file or --family, not both");
        if (!file.empty()) return Generator::validate(load_machine(file));
        if (family == "golden-mean") return golden_mean(R, k, p);
        if (family == "nemo") return nemo(p);
        if (family == "two-step-erase") return two_step_erase(p, q, r);
        if (family == "markov") {
            if (matrix_file.empty())
                throw CliFailure(ExitCode::input, "MissingMatrix",
                                 "markov family needs --matrix file");
            std::ifstream in(matrix_file);
            if (!in)
                throw CliFailure(ExitCode::input, "MissingMatrix",
                                 "cannot open '" + matrix_file + "'");
            json j;
            in >> j;
            json m = j.is_object() ? j.at("matrix") : j;
            std::vector<std::vector<double>> rows = m.get<std::vector<std::vector<double>>>();
            int n = static_cast<int>(rows.size());
            Eigen::MatrixXd P(n, n);
            for (int i = 0; i < n; ++i) {
                if (static_cast<int>(rows[i].size()) != n)
                    throw CliFailure(ExitCode::input, "BadMatrix", "matrix is not square");
                for (int jcol = 0; jcol < n; ++jcol) P(i, jcol) = rows[i][jcol];
            }
            std::vector<std::string> symbols;
            if (j.is_object() && j.contains("symbols"))
                symbols = j.at("symbols").get<std::vector<std::string>>();
            else
                for (int i = 0; i < n; ++i) symbols.push_back(std::to_string(i));
            return markov_chain(P, symbols);
        }
        if (family.empty())
            throw CliFailure(ExitCode::input, "MissingSource",
                             "need a machine file or --family");
        throw CliFailure(ExitCode::input, "UnknownFamily", "unknown family '" + family + "'");
    }

    json describe() const {
        json j;
        if (!file.empty()) {
            j["machine"] = file;
            return j;
        }
        j["family"] = family;
        if (family == "golden-mean") j.update(json{{"R", R}, {"k", k}, {"p", p}});
        if (family == "nemo") j["p"] = p;
        if (family == "two-step-erase") j.update(json{{"p", p}, {"q", q}, {"r", r}});
        if (family == "markov") j["matrix"] = matrix_file;
        return j;
    }
};

PhaseAssignment load_phases(const Generator& g, const std::string& path) {
    if (path.empty()) return PhaseAssignment::zeros(g);
    std::ifstream in(path);
    if (!in) throw CliFailure(ExitCode::input, "MissingPhases", "cannot open '" + path + "'");
    json j;
    in >> j;
    std::vector<double> values(g.edges().size(), 0.0);
    for (const auto& e : j.at("phases")) {
        int s = g.state_index(e.at("state").get<std::string>());
        int x = g.symbol_index(e.at("symbol").get<std::string>());
        int idx = g.edge_index(s, x);
        if (idx < 0)
            throw CliFailure(ExitCode::input, "UnsupportedEdge",
                             "phase given for unsupported (state, symbol) pair");
        values[idx] = e.at("phi").get<double>();
    }
    return PhaseAssignment::from_edge_values(g, std::move(values));
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliFailure(ExitCode::input, "CannotWrite", "cannot write '" + path + "'");
    out << content;
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void write_manifest(const std::string& out_path, const std::string& subcommand, json params) {
    json m;
    m["tool"] = "qmemc";
    m["version"] = kVersion;
    m["subcommand"] = subcommand;
    m["parameters"] = std::move(params);
    write_json(out_path + ".manifest.json", m);
}

int resolve_workers(int flag_value) {
    if (const char* env = std::getenv("QMEMC_WORKERS")) {
        try {
            return std::max(1, std::stoi(env));
        } catch (...) {
            throw CliFailure(ExitCode::input, "BadWorkers", "QMEMC_WORKERS is not an integer");
        }
    }
    return std::max(1, flag_value);
}

// ------------------------------- subcommands --------------------------------

struct AnalyzeArgs {
    MachineSource src;
    std::string phases_file, output, omega_csv_path;
    double temperature{0.0};
    int order_cap{16};
    int horizon{256};
};

int run_analyze(const AnalyzeArgs& a) {
    Generator g = a.src.resolve();
    StationaryDistribution pi = stationary(g);
    OrderOptions oo;
    oo.markov_cap = oo.cryptic_cap = a.order_cap;
    oo.horizon = std::max(a.horizon, a.order_cap);
    ClassicalReport cl = classical_report(g, pi, oo);
    PhaseAssignment phi = load_phases(g, a.phases_file);
    OverlapMatrix omega = solve_overlaps(g, phi);
    QuantumReport q = quantum_report(g, pi, omega);

    json out;
    out["machine"] = machine_to_json(g.to_raw());
    out["classical"] = to_json(cl);
    out["quantum"] = to_json(q);
    if (a.temperature > 0.0) {
        double scale = kBoltzmannJPerK * a.temperature * kLn2;
        out["temperature_K"] = a.temperature;
        out["W_mu_joules"] = cl.W_mu * scale;
        out["W_q_joules"] = q.W_q * scale;
    }

    std::ostringstream tbl;
    tbl << "machine: " << g.num_states() << " states, " << g.num_symbols() << " symbols, "
        << (g.predictive() ? "predictive" : "non-predictive") << "\n";
    auto row = [&](const char* k2, const std::string& v) { tbl << "  " << k2 << ": " << v << "\n"; };
    row("C_mu", format_double(cl.C_mu));
    row("N_mu", format_double(cl.N_mu));
    row("H_X", format_double(cl.H_X));
    row("h_mu", format_double(cl.h_mu));
    row("W_mu", format_double(cl.W_mu));
    row("markov_order", cl.markov_order.to_string());
    row("cryptic_order", cl.cryptic_order.to_string());
    row("C_q", format_double(q.C_q));
    row("N_q", format_double(q.N_q));
    row("W_q", format_double(q.W_q));
    row("Delta_C", format_double(q.Delta_C));
    row("Delta_W", format_double(q.Delta_W));
    row("e_q", q.e_q ? format_double(*q.e_q) : "undefined");
    if (a.temperature > 0.0) {
        row("W_mu [J]", format_double(out["W_mu_joules"].get<double>()));
        row("W_q  [J]", format_double(out["W_q_joules"].get<double>()));
    }
    std::cout << tbl.str();

    if (!a.output.empty()) write_json(a.output, out);
    if (!a.omega_csv_path.empty()) write_text(a.omega_csv_path, omega_csv(omega.omega));
    return ExitCode::ok;
}

struct SweepArgs {
    MachineSource src;
    int n{1000};
    std::uint64_t seed{0};
    bool seed_set{false};
    int workers{1};
    bool gauge_reduced{false};
    std::string output;
};

int run_sweep(const SweepArgs& a) {
    if (!a.seed_set)
        throw CliFailure(ExitCode::input, "MissingSeed", "sweep requires --seed");
    Generator g = a.src.resolve();
    SweepOptions opts;
    opts.workers = resolve_workers(a.workers);
    opts.gauge_reduced = a.gauge_reduced;
    std::vector<SweepRecord> records = sweep(g, a.n, a.seed, opts);
    long failed = 0;
    for (const auto& r : records)
        if (!r.ok()) ++failed;
    write_text(a.output, sweep_csv(g, records));
    write_manifest(a.output, "sweep",
                   json{{"source", a.src.describe()},
                        {"n", a.n},
                        {"seed", a.seed},
                        {"gauge_reduced", a.gauge_reduced}});
    std::cout << records.size() << " records (" << failed << " failed) -> " << a.output << "\n";
    if (2 * failed > static_cast<long>(records.size())) {
        std::cerr << json{{"error", "SolverFailureRate"},
                          {"message", "more than half of the sweep samples failed"}}
                         .dump()
                  << "\n";
        return ExitCode::numeric;
    }
    return ExitCode::ok;
}

struct ChartArgs {
    std::string records_csv, output, svg;
    int bins{40};
};

std::vector<SweepRecord> read_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliFailure(ExitCode::input, "MissingRecords", "cannot open '" + path + "'");
    std::string header;
    if (!std::getline(in, header))
        throw CliFailure(ExitCode::input, "BadRecords", "empty sweep CSV");
    // count phi_ columns to locate the fixed tail fields
    int phases = 0;
    {
        std::stringstream hs(header);
        std::string col;
        while (std::getline(hs, col, ','))
            if (col.rfind("phi_", 0) == 0) ++phases;
    }
    std::vector<SweepRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (static_cast<int>(cells.size()) != phases + 8)
            throw CliFailure(ExitCode::input, "BadRecords", "malformed sweep CSV row");
        SweepRecord r;
        r.sample = std::stoi(cells[0]);
        for (int i = 0; i < phases; ++i) r.phases.push_back(std::stod(cells[1 + i]));
        r.status = cells[phases + 7];
        if (r.status == "ok") {
            r.delta_c = std::stod(cells[phases + 1]);
            r.delta_w = std::stod(cells[phases + 2]);
            if (cells[phases + 3] != "nan") r.e_q = std::stod(cells[phases + 3]);
            r.c_q = std::stod(cells[phases + 4]);
            r.n_q = std::stod(cells[phases + 5]);
            r.w_q = std::stod(cells[phases + 6]);
        }
        out.push_back(std::move(r));
    }
    return out;
}

int run_chart(const ChartArgs& a) {
    std::vector<SweepRecord> records = read_sweep_csv(a.records_csv);
    ChartHistogram h = chart(records, a.bins);
    write_text(a.output, histogram_csv(h));
    if (!a.svg.empty()) write_text(a.svg, chart_svg(records, h));
    write_manifest(a.output, "chart", json{{"records", a.records_csv}, {"bins", a.bins}});
    std::cout << h.total << " records binned " << a.bins << "x" << a.bins << " -> " << a.output
              << "\n";
    return ExitCode::ok;
}

struct OptimizeArgs {
    MachineSource src;
    int budget{256};
    std::uint64_t seed{0};
    bool seed_set{false};
    std::string output;
};

int run_optimize(const OptimizeArgs& a) {
    if (!a.seed_set)
        throw CliFailure(ExitCode::input, "MissingSeed", "optimize requires --seed");
    Generator g = a.src.resolve();
    SweepRecord best = optimize_efficiency(g, a.budget, a.seed);
    json out;
    out["sample"] = best.sample;
    out["phases"] = best.phases;
    out["delta_c"] = best.delta_c;
    out["delta_w"] = best.delta_w;
    out["e_q"] = best.e_q ? json(*best.e_q) : json(nullptr);
    out["c_q"] = best.c_q;
    out["n_q"] = best.n_q;
    out["w_q"] = best.w_q;
    std::cout << "best e_q = " << (best.e_q ? format_double(*best.e_q) : "undefined") << "\n";
    if (!a.output.empty()) {
        write_json(a.output, out);
        write_manifest(a.output, "optimize",
                       json{{"source", a.src.describe()}, {"budget", a.budget}, {"seed", a.seed}});
    }
    return ExitCode::ok;
}

struct OneShotArgs {
    MachineSource src;
    std::string phases_file, output;
    double epsilon{1e-3};
};

int run_oneshot(const OneShotArgs& a) {
    if (!(a.epsilon > 0.0 && a.epsilon < 1.0))
        throw CliFailure(ExitCode::input, "EpsilonOutOfRange",
                         "--epsilon must lie in (0, 1)");
    Generator g = a.src.resolve();
    StationaryDistribution pi = stationary(g);
    PhaseAssignment phi = load_phases(g, a.phases_file);
    OverlapMatrix omega = solve_overlaps(g, phi);
    OneShotReport r = single_shot_bound(g, pi, omega, a.epsilon);
    json out = to_json(r);
    std::cout << "bound_bits = " << format_double(r.bound_bits) << " (o_term_omitted)\n";
    if (!a.output.empty()) write_json(a.output, out);
    return ExitCode::ok;
}

struct AepArgs {
    std::vector<double> p;
    std::vector<long> Ns;
    double epsilon{1e-3};
    std::string output;
};

int run_aep(const AepArgs& a) {
    if (!(a.epsilon > 0.0 && a.epsilon < 1.0))
        throw CliFailure(ExitCode::input, "EpsilonOutOfRange", "--epsilon must lie in (0, 1)");
    Eigen::VectorXd p;
    if (a.p.size() == 1) {
        p = Eigen::Vector2d(a.p[0], 1.0 - a.p[0]);
    } else {
        p.resize(static_cast<Eigen::Index>(a.p.size()));
        for (size_t i = 0; i < a.p.size(); ++i) p[static_cast<Eigen::Index>(i)] = a.p[i];
    }
    std::ostringstream csv;
    csv << "N,epsilon,hmax_rate,hmin_rate,shannon,gap\n";
    for (long N : a.Ns) {
        AepPoint pt = aep_check(p, N, a.epsilon);
        csv << pt.N << ',' << format_double(pt.epsilon) << ',' << format_double(pt.hmax_rate)
            << ',' << format_double(pt.hmin_rate) << ',' << format_double(pt.shannon) << ','
            << format_double(pt.gap) << '\n';
        std::cout << "N=" << pt.N << " hmax_rate=" << format_double(pt.hmax_rate)
                  << " gap=" << format_double(pt.gap) << "\n";
    }
    if (!a.output.empty()) {
        write_text(a.output, csv.str());
        write_manifest(a.output, "aep",
                       json{{"p", a.p}, {"N", a.Ns}, {"epsilon", a.epsilon}});
    }
    return ExitCode::ok;
}

struct FamilyArgs {
    std::string name;
    int R{1}, k{1};
    double p{0.5}, q{0.2}, r{0.4};
    std::string matrix_file, output;
};

int run_family(const FamilyArgs& a) {
    MachineSource src;
    src.family = a.name;
    src.R = a.R;
    src.k = a.k;
    src.p = a.p;
    src.q = a.q;
    src.r = a.r;
    src.matrix_file = a.matrix_file;
    Generator g = src.resolve();
    save_machine(g.to_raw(), a.output);
    std::cout << "wrote " << a.output << " (" << g.num_states() << " states)\n";
    return ExitCode::ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"memory and work costs of classical and quantum generator implementations"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    AnalyzeArgs an;
    auto* c_an = app.add_subcommand("analyze", "classical + quantum report for one machine");
    an.src.add_options(c_an);
    c_an->add_option("--phases", an.phases_file, "phase assignment JSON (default all-zero)");
    c_an->add_option("--temperature", an.temperature, "report work in joules at this temperature [K]");
    c_an->add_option("--order-cap", an.order_cap, "cap for Markov/cryptic order search");
    c_an->add_option("--horizon", an.horizon, "depth budget for cryptic-order certification");
    c_an->add_option("-o,--output", an.output, "combined report JSON path");
    c_an->add_option("--omega", an.omega_csv_path, "write overlap matrix CSV here");

    SweepArgs sw;
    auto* c_sw = app.add_subcommand("sweep", "sample phases and evaluate quantum reports");
    sw.src.add_options(c_sw);
    c_sw->add_option("--n", sw.n, "sample count")->required();
    c_sw->add_option("--seed", sw.seed, "64-bit seed")->each([&](const std::string&) { sw.seed_set = true; });
    c_sw->add_option("--workers", sw.workers, "worker threads (QMEMC_WORKERS overrides)");
    c_sw->add_flag("--gauge-reduced", sw.gauge_reduced, "sample only loop-invariant directions");
    c_sw->add_option("-o,--output", sw.output, "sweep CSV path")->required();

    ChartArgs ch;
    auto* c_ch = app.add_subcommand("chart", "2D (delta_c, delta_w) histogram from a sweep CSV");
    c_ch->add_option("--records", ch.records_csv, "sweep CSV")->required();
    c_ch->add_option("--bins", ch.bins, "bins per axis");
    c_ch->add_option("-o,--output", ch.output, "histogram CSV path")->required();
    c_ch->add_option("--svg", ch.svg, "density chart SVG path");

    OptimizeArgs op;
    auto* c_op = app.add_subcommand("optimize", "search phases for maximal e_q");
    op.src.add_options(c_op);
    c_op->add_option("--budget", op.budget, "random-search budget");
    c_op->add_option("--seed", op.seed, "64-bit seed")->each([&](const std::string&) { op.seed_set = true; });
    c_op->add_option("-o,--output", op.output, "best-record JSON path");

    OneShotArgs os;
    auto* c_os = app.add_subcommand("oneshot", "single-shot work bound at failure probability eps");
    os.src.add_options(c_os);
    c_os->add_option("--epsilon", os.epsilon, "failure probability in (0,1)")->required();
    c_os->add_option("--phases", os.phases_file, "phase assignment JSON (default all-zero)");
    c_os->add_option("-o,--output", os.output, "one-shot report JSON path");

    AepArgs ae;
    auto* c_ae = app.add_subcommand("aep", "smooth-entropy rates of product spectra");
    c_ae->add_option("--p", ae.p, "symbol distribution (single value means binary)")->required();
    c_ae->add_option("--N", ae.Ns, "copy counts")->required()->delimiter(',');
    c_ae->add_option("--epsilon", ae.epsilon, "smoothing parameter in (0,1)");
    c_ae->add_option("-o,--output", ae.output, "CSV output path");

    FamilyArgs fa;
    auto* c_fa = app.add_subcommand("family", "export a family machine to the JSON format");
    c_fa->add_option("name", fa.name, "golden-mean | nemo | two-step-erase | markov")->required();
    c_fa->add_option("--R", fa.R, "Golden-Mean Markov-part length");
    c_fa->add_option("--k", fa.k, "Golden-Mean cryptic-part length");
    c_fa->add_option("--p", fa.p, "family parameter p");
    c_fa->add_option("--q", fa.q, "family parameter q");
    c_fa->add_option("--r", fa.r, "family parameter r");
    c_fa->add_option("--matrix", fa.matrix_file, "row-stochastic matrix JSON (markov)");
    c_fa->add_option("-o,--output", fa.output, "machine JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        std::cerr << nlohmann::json{{"error", "BadArguments"}, {"message", e.what()}}.dump()
                  << "\n";
        return ExitCode::input;
    }

    try {
        if (c_an->parsed()) return run_analyze(an);
        if (c_sw->parsed()) return run_sweep(sw);
        if (c_ch->parsed()) return run_chart(ch);
        if (c_op->parsed()) return run_optimize(op);
        if (c_os->parsed()) return run_oneshot(os);
        if (c_ae->parsed()) return run_aep(ae);
        if (c_fa->parsed()) return run_family(fa);
    } catch (const CliFailure& e) {
        std::cerr << nlohmann::json{{"error", e.tag}, {"message", e.what()}}.dump() << "\n";
        return e.code;
    } catch (const Error& e) {
        std::cerr << nlohmann::json{{"error", error_tag(e)}, {"message", e.what()}}.dump() << "\n";
        return error_exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
        return ExitCode::input;
    }
    return ExitCode::ok;
}
