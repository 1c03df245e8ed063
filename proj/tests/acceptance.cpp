// Runs the fifteen acceptance criteria and prints one PASS/FAIL line each.
// Results are also written under $LAB_OUTPUT_DIR/acceptance.

#include <iostream>

#include "sobolab/lab.hpp"

int main() {
    namespace lab = sobolab::lab;
    int failed = 0;
    lab::run_suite("acceptance", lab::output_root() / "acceptance", [&](const lab::CriterionResult& r) {
        std::cout << lab::format_result_line(r) << std::endl;
        if (!r.passed) ++failed;
    });
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
    return failed == 0 ? 0 : 1;
}
