// Command-line front end: one subcommand per registered experiment, with a
// flag for every config key, plus the acceptance suites.

#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "sobolab/common.hpp"
#include "sobolab/lab.hpp"

namespace lab = sobolab::lab;

namespace {

struct ExperimentCommand {
    const lab::Experiment* experiment = nullptr;
    CLI::App* app = nullptr;
    std::string config_file;
    std::string output_dir;
    std::map<std::string, std::string> flags;
};

int run_experiment_command(ExperimentCommand& cmd) {
    const auto& exp = *cmd.experiment;
    lab::Json file;
    if (!cmd.config_file.empty()) file = lab::read_config_file(cmd.config_file);
    lab::Json overrides = lab::Json::object();
    for (const auto& [key, text] : cmd.flags) {
        if (cmd.app->count("--" + key) == 0) continue;
        try {
            overrides[key] = lab::parse_flag_value(text, exp.defaults[key]);
        } catch (const lab::UsageError& e) {
            throw lab::UsageError("--" + key + ": " + e.what());
        }
    }
    const lab::Json config = lab::resolve_config(exp, file, overrides);
    const auto outcome = lab::run_experiment(exp, config);
    const auto dir = cmd.output_dir.empty() ? lab::output_root() / exp.id : std::filesystem::path(cmd.output_dir);
    lab::write_outcome(outcome, dir);

    std::cout << exp.id << ": " << outcome.summary.value("headline", std::string()) << "\n";
    for (const auto& f : outcome.failures) std::cout << "  assertion failed: " << f << "\n";
    std::cout << (outcome.passed ? "PASS" : "FAIL") << "  (results in " << dir.string() << ")\n";
    return outcome.passed ? lab::exit_ok : lab::exit_assertion;
}

int run_suite_command(const std::string& name, const std::string& output_dir) {
    const auto dir = output_dir.empty() ? lab::output_root() / ("suite-" + name) : std::filesystem::path(output_dir);
    bool all = true, numerical = false;
    lab::run_suite(name, dir, [&](const lab::CriterionResult& r) {
        std::cout << lab::format_result_line(r) << std::endl;
        all = all && r.passed;
        numerical = numerical || r.numerical_failure;
    });
    if (numerical) return lab::exit_numerical;
    return all ? lab::exit_ok : lab::exit_assertion;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sobolev-space trace, co-normal and coefficient experiments"};
    app.require_subcommand(1);

    std::vector<ExperimentCommand> commands;
    commands.reserve(lab::registry().size());
    for (const auto& exp : lab::registry()) {
        auto& cmd = commands.emplace_back();
        cmd.experiment = &exp;
        cmd.app = app.add_subcommand(exp.id, exp.description);
        cmd.app->add_option("--config", cmd.config_file, "JSON config file (keys as below)");
        cmd.app->add_option("--output", cmd.output_dir, "result directory (default $LAB_OUTPUT_DIR/<id>)");
        for (const auto& [key, value] : exp.defaults.items()) {
            const std::string hint = value.is_array() ? "comma-separated, default " : "default ";
            cmd.app->add_option("--" + key, cmd.flags[key], hint + value.dump());
        }
    }

    std::string suite_name, suite_output;
    auto* suite = app.add_subcommand("suite", "run an acceptance suite (acceptance or quick)");
    suite->add_option("name", suite_name, "suite name")->required();
    suite->add_option("--output", suite_output, "result directory");

    auto* list = app.add_subcommand("list", "list experiments and their defaults");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return lab::exit_usage;
    }

    try {
        if (list->parsed()) {
            for (const auto& exp : lab::registry())
                std::cout << exp.id << "  " << exp.description << "\n    " << exp.defaults.dump() << "\n";
            return lab::exit_ok;
        }
        if (suite->parsed()) return run_suite_command(suite_name, suite_output);
        for (auto& cmd : commands)
            if (cmd.app->parsed()) return run_experiment_command(cmd);
    } catch (const lab::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return lab::exit_usage;
    } catch (const sobolab::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return lab::exit_numerical;
    } catch (const sobolab::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return lab::exit_usage;
    }
    return lab::exit_usage;
}
