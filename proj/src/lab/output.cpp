#include "sobolab/lab.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sobolab::lab {

namespace {

std::string format_cell(const Json& v) {
    if (v.is_number_float()) {
        const double x = v.get<double>();
        if (std::isnan(x)) return "nan";
        if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return buf;
    }
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string quoted = "\"";
        for (char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
        return quoted + "\"";
    }
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace

std::filesystem::path output_root() {
    if (const char* dir = std::getenv("LAB_OUTPUT_DIR"); dir != nullptr && *dir != '\0') return dir;
    return "lab_output";
}

std::string format_csv(const Table& table) {
    std::ostringstream out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_cell(row[c]);
        out << '\n';
    }
    return out.str();
}

void write_outcome(const Outcome& outcome, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    Json config = {{"experiment", outcome.experiment}, {"config", outcome.config}};
    write_file(dir / "config.json", config.dump(2) + "\n");
    Json summary = outcome.summary;
    summary["passed"] = outcome.passed;
    summary["failures"] = outcome.failures;
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    for (const auto& table : outcome.tables) write_file(dir / (table.name + ".csv"), format_csv(table));
}

}  // namespace sobolab::lab
