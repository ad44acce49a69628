#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "ctscuc/analysis.hpp"
#include "ctscuc/formulation.hpp"
#include "ctscuc/network.hpp"
#include "ctscuc/solution.hpp"
#include "ctscuc/verifier.hpp"

namespace ctscuc {

using nlohmann::json;

/// Thrown for malformed result documents and option blocks.
class ResultFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kResultFormat = "ctscuc-result";
inline constexpr int kResultVersion = 1;

std::string to_string(EmergencyRatingMode mode);
EmergencyRatingMode parse_emergency_rating_mode(const std::string& text);
std::string to_string(const BigMPolicy& policy);
/// "per-line" or "fixed:<MW>".
BigMPolicy parse_big_m(const std::string& text);

json options_to_json(const SolveOptions& options);
SolveOptions options_from_json(const json& j);

json verification_to_json(const VerificationReport& report);

/// Every model variable by name, in name order.
json variables_to_json(const SolveResult& result);
/// Rebuilds a Solution from the "solve" and "variables" sections.
Solution solution_from_result(const Case& c, const ContingencySet& contingencies,
                              const json& result);

json to_json(const StartupReport& report);
json to_json(const std::vector<SwitchingRow>& rows);
json to_json(const CongestionReport& report);
/// Only (line, period) pairs congested in either run.
json to_json(const OverloadReport& report);
json to_json(const Sweep& sweep);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& doc);

}  // namespace ctscuc
