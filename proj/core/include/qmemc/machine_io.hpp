// machine_io.hpp — JSON machine format and report serialization
//
// Machine files: {"states":[...], "alphabet":[...],
//                 "transitions":[{"from":..., "symbol":..., "to":..., "p":...}]}
// This format is the single source for the CLI and tests.

#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "qmemc/classical.hpp"
#include "qmemc/generator.hpp"
#include "qmemc/oneshot.hpp"
#include "qmemc/quantum.hpp"

namespace qmemc {

RawMachine machine_from_json(const nlohmann::json& j);
nlohmann::json machine_to_json(const RawMachine& raw);

RawMachine load_machine(const std::string& path);
void save_machine(const RawMachine& raw, const std::string& path);

nlohmann::json to_json(const ClassicalReport& r);
nlohmann::json to_json(const QuantumReport& r);
nlohmann::json to_json(const OneShotReport& r);

// Omega as CSV rows (row, col, re, im)
std::string omega_csv(const Eigen::MatrixXcd& omega);

// shortest round-trip decimal formatting (std::to_chars); used by every CSV
// writer so reruns are byte-identical
std::string format_double(double v);

} // namespace qmemc
