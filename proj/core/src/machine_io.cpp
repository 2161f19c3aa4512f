#include "qmemc/machine_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qmemc/errors.hpp"

namespace qmemc {

using nlohmann::json;

RawMachine machine_from_json(const json& j) {
    RawMachine raw;
    try {
        raw.states = j.at("states").get<std::vector<std::string>>();
        raw.alphabet = j.at("alphabet").get<std::vector<std::string>>();
        for (const auto& t : j.at("transitions")) {
            raw.transitions.push_back({t.at("from").get<std::string>(),
                                       t.at("symbol").get<std::string>(),
                                       t.at("to").get<std::string>(), t.at("p").get<double>()});
        }
    } catch (const json::exception& e) {
        throw Error(std::string("machine_from_json: malformed machine file: ") + e.what());
    }
    return raw;
}

json machine_to_json(const RawMachine& raw) {
    json j;
    j["states"] = raw.states;
    j["alphabet"] = raw.alphabet;
    j["transitions"] = json::array();
    for (const auto& t : raw.transitions)
        j["transitions"].push_back({{"from", t.from}, {"symbol", t.symbol}, {"to", t.to}, {"p", t.p}});
    return j;
}

RawMachine load_machine(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("load_machine: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("load_machine: invalid JSON in '" + path + "': " + e.what());
    }
    return machine_from_json(j);
}

void save_machine(const RawMachine& raw, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("save_machine: cannot open '" + path + "'");
    out << machine_to_json(raw).dump(2) << '\n';
}

json to_json(const ClassicalReport& r) {
    json j;
    j["C_mu"] = r.C_mu;
    j["N_mu"] = r.N_mu;
    j["H_X"] = r.H_X;
    j["h_mu"] = r.h_mu;
    j["W_mu"] = r.W_mu;
    j["markov_order"] = r.markov_order.exceeds_cap ? json("exceeds-cap") : json(r.markov_order.value);
    j["cryptic_order"] =
        r.cryptic_order.exceeds_cap ? json("exceeds-cap") : json(r.cryptic_order.value);
    return j;
}

json to_json(const QuantumReport& r) {
    json j;
    j["C_q"] = r.C_q;
    j["N_q"] = r.N_q;
    j["W_q"] = r.W_q;
    j["Delta_C"] = r.Delta_C;
    j["Delta_W"] = r.Delta_W;
    j["e_q"] = r.e_q ? json(*r.e_q) : json(nullptr);
    return j;
}

json to_json(const OneShotReport& r) {
    json j;
    j["epsilon"] = r.epsilon;
    j["H_max_S_smooth"] = r.H_max_S_smooth;
    j["H_min_cond"] = r.H_min_cond;
    j["H_min_X"] = r.H_min_X;
    j["bound_bits"] = r.bound_bits;
    j["o_term_omitted"] = r.o_term_omitted;
    return j;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string omega_csv(const Eigen::MatrixXcd& omega) {
    std::ostringstream out;
    out << "row,col,re,im\n";
    for (Eigen::Index r = 0; r < omega.rows(); ++r)
        for (Eigen::Index c = 0; c < omega.cols(); ++c)
            out << r << ',' << c << ',' << format_double(omega(r, c).real()) << ','
                << format_double(omega(r, c).imag()) << '\n';
    return out.str();
}

} // namespace qmemc
