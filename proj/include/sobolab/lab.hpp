#pragma once

// Experiment runner: a registry of configured experiments, JSON configs with
// typed defaults, CSV/JSON result files and the acceptance suites.

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace sobolab::lab {

using Json = nlohmann::ordered_json;

/// Bad command line, config file or config value.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum ExitCode : int { exit_ok = 0, exit_usage = 2, exit_assertion = 3, exit_numerical = 4 };

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Json>> rows;
};

struct Outcome {
    std::string experiment;
    Json config;
    /// Measured values; "headline" holds a one-line digest.
    Json summary;
    std::vector<Table> tables;
    bool passed = true;
    std::vector<std::string> failures;

    /// Records a failed assertion unless `ok`.
    void expect(bool ok, const std::string& what);
};

struct Experiment {
    std::string id;
    std::string description;
    /// Every accepted key with its default; values fix the key's type.
    Json defaults;
    std::function<Outcome(const Json& config)> run;
};

const std::vector<Experiment>& registry();
/// UsageError for an unknown id.
const Experiment& find_experiment(std::string_view id);

/// Defaults overlaid with `file` and then `overrides`. Unknown keys and
/// type mismatches raise UsageError.
Json resolve_config(const Experiment& experiment, const Json& file, const Json& overrides);
Json read_config_file(const std::filesystem::path& path);
/// Parses a command-line value to the type of `like` (arrays are comma-separated).
Json parse_flag_value(const std::string& text, const Json& like);

/// Runs with the resolved config and stamps it into the outcome.
Outcome run_experiment(const Experiment& experiment, const Json& resolved);

/// LAB_OUTPUT_DIR, or "lab_output" in the working directory.
std::filesystem::path output_root();
/// config.json, summary.json and one CSV per table under `dir`.
void write_outcome(const Outcome& outcome, const std::filesystem::path& dir);
/// Numbers printed with 17 significant digits; non-finite values as inf/-inf/nan.
std::string format_csv(const Table& table);

struct Criterion {
    int number = 0;
    std::string title;
    std::string experiment;
    /// Overrides applied on top of the experiment defaults.
    Json config;
};

const std::vector<Criterion>& acceptance_criteria();
/// Lighter experiment runs for a fast smoke pass.
const std::vector<Criterion>& quick_criteria();

struct CriterionResult {
    int number = 0;
    std::string title;
    bool passed = false;
    bool numerical_failure = false;
    std::string measured;
    double seconds = 0.0;
    Outcome outcome;
};

CriterionResult run_criterion(const Criterion& criterion);
/// "acceptance" or "quick"; UsageError otherwise. Writes results under
/// output_dir when it is non-empty.
std::vector<CriterionResult> run_suite(std::string_view name, const std::filesystem::path& output_dir = {},
                                       const std::function<void(const CriterionResult&)>& on_result = {});
std::string format_result_line(const CriterionResult& result);

}  // namespace sobolab::lab
