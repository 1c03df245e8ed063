#include "sobolab/lab.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace sobolab::lab {

namespace {

bool is_integer_json(const Json& v) { return v.is_number_integer() || v.is_number_unsigned(); }

// Converts `value` to the type of `like`, or throws UsageError.
Json coerce(const std::string& key, const Json& value, const Json& like) {
    auto fail = [&](const char* want) {
        return UsageError("config key '" + key + "' expects " + want + ", got " + value.dump());
    };
    if (like.is_boolean()) {
        if (!value.is_boolean()) throw fail("a boolean");
        return value;
    }
    if (like.is_string()) {
        if (!value.is_string()) throw fail("a string");
        return value;
    }
    if (is_integer_json(like)) {
        if (is_integer_json(value)) return value;
        if (value.is_number_float() && std::floor(value.get<double>()) == value.get<double>())
            return static_cast<long long>(value.get<double>());
        throw fail("an integer");
    }
    if (like.is_number()) {
        if (!value.is_number()) throw fail("a number");
        return value.get<double>();
    }
    if (like.is_array()) {
        if (!value.is_array()) throw fail("an array");
        const Json element = like.empty() ? Json(0.0) : like.front();
        Json out = Json::array();
        for (const auto& v : value) out.push_back(coerce(key, v, element));
        return out;
    }
    throw fail("a supported value");
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
}

}  // namespace

void Outcome::expect(bool ok, const std::string& what) {
    if (ok) return;
    passed = false;
    failures.push_back(what);
}

const Experiment& find_experiment(std::string_view id) {
    for (const auto& e : registry())
        if (e.id == id) return e;
    throw UsageError("unknown experiment '" + std::string(id) + "'");
}

Json resolve_config(const Experiment& experiment, const Json& file, const Json& overrides) {
    Json resolved = experiment.defaults;
    for (const Json* layer : {&file, &overrides}) {
        if (layer->is_null()) continue;
        if (!layer->is_object()) throw UsageError("config must be a JSON object");
        for (const auto& [key, value] : layer->items()) {
            if (!experiment.defaults.contains(key))
                throw UsageError("unknown config key '" + key + "' for experiment " + experiment.id);
            resolved[key] = coerce(key, value, experiment.defaults[key]);
        }
    }
    return resolved;
}

Json read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw UsageError("config file " + path.string() + ": " + e.what());
    }
}

Json parse_flag_value(const std::string& text, const Json& like) {
    try {
        if (like.is_string()) return text;
        if (like.is_boolean()) {
            if (text == "true" || text == "1") return true;
            if (text == "false" || text == "0") return false;
            throw UsageError("expected true or false, got '" + text + "'");
        }
        if (like.is_array()) {
            const Json element = like.empty() ? Json(0.0) : like.front();
            Json out = Json::array();
            for (const auto& part : split_commas(text)) out.push_back(parse_flag_value(part, element));
            return out;
        }
        std::size_t used = 0;
        if (is_integer_json(like)) {
            const long long v = std::stoll(text, &used);
            if (used != text.size()) throw UsageError("expected an integer, got '" + text + "'");
            return v;
        }
        const double v = std::stod(text, &used);
        if (used != text.size()) throw UsageError("expected a number, got '" + text + "'");
        return v;
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const UsageError*>(&e)) throw;
        throw UsageError("cannot parse '" + text + "'");
    }
}

Outcome run_experiment(const Experiment& experiment, const Json& resolved) {
    Outcome out = experiment.run(resolved);
    out.experiment = experiment.id;
    out.config = resolved;
    return out;
}

}  // namespace sobolab::lab
