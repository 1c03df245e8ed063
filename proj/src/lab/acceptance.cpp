#include "sobolab/lab.hpp"

#include <chrono>
#include <cstdio>

#include "sobolab/common.hpp"

namespace sobolab::lab {

const std::vector<Criterion>& acceptance_criteria() {
    static const std::vector<Criterion> criteria = {
        {1, "trace constant closed form", "trace-norm",
         {{"check", "constant"}, {"s", {0.6, 0.75, 1.0, 1.25}}}},
        {2, "adjoint-trace norm identity", "trace-norm",
         {{"check", "adjoint-identity"}, {"s", {0.6, 0.75, 1.0}}, {"samples", 100}, {"N", 256}}},
        {3, "trace norm blow-up trend", "trace-norm",
         {{"check", "blowup"}, {"s", {0.51, 0.55, 0.6, 0.75, 1.0}}}},
        {4, "extension right inverse", "extension", Json::object()},
        {5, "FEM convergence", "bvp", Json::object()},
        {6, "aggregate co-normal vanishing", "conormal", {{"check", "aggregate-vanishing"}}},
        {7, "first Green identity", "green", {{"check", "first"}}},
        {8, "lifting independence", "conormal", {{"check", "lifting"}}},
        {9, "canonical co-normal equals classical", "conormal", {{"check", "canonical-rate"}}},
        {10, "nomination round trip", "conormal", {{"check", "nomination"}}},
        {11, "second Green identities", "green", {{"check", "second"}}},
        {12, "commutator bound", "commutator", Json::object()},
        {13, "a-priori estimate", "apriori", Json::object()},
        {14, "nonzero ball pairing", "appendix", {{"min_value", 1.0}}},
        {15, "regularity probe", "regularity", Json::object()},
    };
    return criteria;
}

const std::vector<Criterion>& quick_criteria() {
    static const std::vector<Criterion> criteria = {
        {1, "trace constant closed form", "trace-norm", {{"check", "constant"}}},
        {2, "adjoint-trace norm identity", "trace-norm",
         {{"check", "adjoint-identity"}, {"s", {0.75}}, {"samples", 10}, {"N", 64}}},
        {3, "trace norm blow-up trend", "trace-norm",
         {{"check", "blowup"}, {"s", {0.55, 0.75, 1.0}}, {"N", 128}, {"probes", 40}}},
        {4, "extension right inverse", "extension", {{"samples", 5}, {"N", 64}}},
        {5, "FEM convergence", "bvp", {{"levels", {8, 16, 32}}}},
        {6, "aggregate co-normal vanishing", "conormal", {{"check", "aggregate-vanishing"}, {"samples", 3}}},
        {7, "first Green identity", "green", {{"check", "first"}, {"samples", 1}}},
        {8, "lifting independence", "conormal", {{"check", "lifting"}}},
        {9, "canonical co-normal equals classical", "conormal", {{"check", "canonical-rate"}, {"refine", 2}}},
        {10, "nomination round trip", "conormal", {{"check", "nomination"}, {"samples", 3}}},
        {11, "second Green identities", "green", {{"check", "second"}, {"samples", 1}}},
        {12, "commutator bound", "commutator", {{"N", {64, 128}}}},
        {13, "a-priori estimate", "apriori", {{"samples", 5}, {"N", 32}}},
        {14, "nonzero ball pairing", "appendix", {{"min_value", 1.0}, {"spectral_check", false}}},
        {15, "regularity probe", "regularity", {{"points", 4096}, {"lacunary_index", 0.0}}},
        {16, "density recovery", "recover-density", {{"samples", 3}, {"N", 64}}},
        {17, "product bound", "product-bound", {{"N", {64, 128}}}},
    };
    return criteria;
}

CriterionResult run_criterion(const Criterion& criterion) {
    CriterionResult result;
    result.number = criterion.number;
    result.title = criterion.title;
    const auto start = std::chrono::steady_clock::now();
    const auto& experiment = find_experiment(criterion.experiment);
    const Json config = resolve_config(experiment, Json(), criterion.config);
    try {
        result.outcome = run_experiment(experiment, config);
        result.passed = result.outcome.passed;
        result.measured = result.outcome.summary.value("headline", std::string());
    } catch (const NumericalFailure& e) {
        result.numerical_failure = true;
        result.measured = std::string("numerical failure: ") + e.what();
        result.outcome.experiment = experiment.id;
        result.outcome.config = config;
        result.outcome.passed = false;
        result.outcome.failures.push_back(result.measured);
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::vector<CriterionResult> run_suite(std::string_view name, const std::filesystem::path& output_dir,
                                       const std::function<void(const CriterionResult&)>& on_result) {
    const std::vector<Criterion>* criteria = nullptr;
    if (name == "acceptance")
        criteria = &acceptance_criteria();
    else if (name == "quick")
        criteria = &quick_criteria();
    else
        throw UsageError("unknown suite '" + std::string(name) + "' (expected acceptance or quick)");

    std::vector<CriterionResult> results;
    for (const auto& criterion : *criteria) {
        auto result = run_criterion(criterion);
        if (!output_dir.empty()) {
            char dir[16];
            std::snprintf(dir, sizeof dir, "%02d", criterion.number);
            write_outcome(result.outcome, output_dir / (std::string(dir) + "-" + criterion.experiment));
        }
        if (on_result) on_result(result);
        results.push_back(std::move(result));
    }
    return results;
}

std::string format_result_line(const CriterionResult& result) {
    char head[96];
    std::snprintf(head, sizeof head, "%s [%02d] ", result.passed ? "PASS" : "FAIL", result.number);
    char tail[32];
    std::snprintf(tail, sizeof tail, " (%.1f s)", result.seconds);
    std::string line = head + result.title + ": " + result.measured + tail;
    if (!result.passed)
        for (const auto& f : result.outcome.failures) line += "\n       - " + f;
    return line;
}

}  // namespace sobolab::lab
