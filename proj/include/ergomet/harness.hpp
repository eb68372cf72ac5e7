#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergomet/measures.hpp"

namespace ergomet {

// Raised when a scenario config is missing or malformed; the message names
// the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Zero-entropy membership test: conditional block entropy at the given order
// must not exceed the threshold.
struct ClassMembershipOracle {
    int order = 8;
    double threshold = 0.02;  // nats

    bool in_class(double entropy) const { return entropy <= threshold; }
};

struct ScenarioCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ScenarioResult {
    std::string scenario;
    bool ok = false;
    std::vector<ScenarioCheck> checks;
    std::vector<std::filesystem::path> outputs;
};

// Cyclic word of length alphabet^order containing every order-word once.
std::vector<int> de_bruijn(int alphabet, int order);

ScenarioResult run_separation(const nlohmann::json& config, const std::filesystem::path& outdir);
ScenarioResult run_besicovitch_limit(const nlohmann::json& config,
                                     const std::filesystem::path& outdir);
ScenarioResult run_closedness(const nlohmann::json& config, const std::filesystem::path& outdir);
ScenarioResult run_joining_audit(const nlohmann::json& config, const std::filesystem::path& outdir);

// Dispatch by scenario name ("separation", "besicovitch_limit", "closedness",
// "joining_audit").
ScenarioResult run_scenario(const std::string& name, const nlohmann::json& config,
                            const std::filesystem::path& outdir);

}  // namespace ergomet
