#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "sobolab/lab.hpp"

using namespace sobolab::lab;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("sobolab_lab_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST(Registry, HasEveryExperiment) {
    std::set<std::string> ids;
    for (const auto& e : registry()) ids.insert(e.id);
    EXPECT_EQ(ids, (std::set<std::string>{"trace-norm", "extension", "recover-density", "bvp", "conormal", "green",
                                          "commutator", "product-bound", "apriori", "regularity", "appendix"}));
    EXPECT_THROW(find_experiment("nope"), UsageError);
}

TEST(Registry, EveryCriterionNamesOneExperiment) {
    std::set<int> numbers;
    for (const auto& c : acceptance_criteria()) {
        EXPECT_NO_THROW(resolve_config(find_experiment(c.experiment), Json(), c.config)) << c.number;
        numbers.insert(c.number);
    }
    EXPECT_EQ(numbers.size(), 15u);
    EXPECT_EQ(*numbers.begin(), 1);
    EXPECT_EQ(*numbers.rbegin(), 15);
}

TEST(Config, LayersFileThenOverrides) {
    const auto& e = find_experiment("commutator");
    const Json resolved = resolve_config(e, Json{{"t", 0.5}, {"N", {64}}}, Json{{"t", 0.75}});
    EXPECT_DOUBLE_EQ(resolved["t"].get<double>(), 0.75);
    EXPECT_EQ(resolved["N"], Json::array({64}));
    EXPECT_DOUBLE_EQ(resolved["s"].get<double>(), 0.5);
}

TEST(Config, RejectsUnknownKeysAndWrongTypes) {
    const auto& e = find_experiment("trace-norm");
    EXPECT_THROW(resolve_config(e, Json{{"bogus", 1}}, Json()), UsageError);
    EXPECT_THROW(resolve_config(e, Json{{"check", 3}}, Json()), UsageError);
    EXPECT_THROW(resolve_config(e, Json{{"N", 2.5}}, Json()), UsageError);
    EXPECT_THROW(resolve_config(e, Json{{"s", "x"}}, Json()), UsageError);
    EXPECT_THROW(resolve_config(e, Json::array(), Json()), UsageError);
    // Integral floats are accepted for integer keys.
    EXPECT_EQ(resolve_config(e, Json{{"N", 128.0}}, Json())["N"].get<long long>(), 128);
}

TEST(Config, FlagValuesFollowTheDefaultType) {
    EXPECT_EQ(parse_flag_value("0.5,1,2", Json::array({1.0})), Json::array({0.5, 1.0, 2.0}));
    EXPECT_EQ(parse_flag_value("64,128", Json::array({1})), Json::array({64, 128}));
    EXPECT_EQ(parse_flag_value("true", Json(false)), Json(true));
    EXPECT_EQ(parse_flag_value("a,b", Json::array({"x"})), Json::array({"a", "b"}));
    EXPECT_THROW(parse_flag_value("12x", Json(1)), UsageError);
    EXPECT_THROW(parse_flag_value("1.5", Json(1)), UsageError);
    EXPECT_THROW(parse_flag_value("maybe", Json(true)), UsageError);
}

TEST(Config, BadConfigFileIsAUsageError) {
    const auto dir = scratch("badfile");
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "c.json") << "{ not json";
    EXPECT_THROW(read_config_file(dir / "c.json"), UsageError);
    EXPECT_THROW(read_config_file(dir / "missing.json"), UsageError);
}

TEST(Output, CsvFormatting) {
    Table t{"t", {"a", "b", "c"}, {{0.1, "x,y", true}, {std::numeric_limits<double>::infinity(), "plain", 3}}};
    EXPECT_EQ(format_csv(t), "a,b,c\n0.10000000000000001,\"x,y\",true\ninf,plain,3\n");
}

TEST(Output, RunsAreByteIdentical) {
    const auto& e = find_experiment("product-bound");
    const Json cfg = resolve_config(e, Json(), Json{{"N", {64, 128}}});
    const auto a = scratch("repeat_a"), b = scratch("repeat_b");
    write_outcome(run_experiment(e, cfg), a);
    write_outcome(run_experiment(e, cfg), b);
    for (const auto* name : {"config.json", "summary.json", "product_bound.csv"}) {
        ASSERT_TRUE(std::filesystem::exists(a / name)) << name;
        EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
    }
    const Json written = Json::parse(slurp(a / "config.json"));
    EXPECT_EQ(written["experiment"], "product-bound");
    EXPECT_EQ(written["config"], cfg);
}

TEST(Suite, UnknownSuiteIsAUsageError) { EXPECT_THROW(run_suite("nightly"), UsageError); }

TEST(Suite, ResultLineFormat) {
    CriterionResult r;
    r.number = 7;
    r.title = "demo";
    r.passed = true;
    r.measured = "x=1";
    EXPECT_EQ(format_result_line(r).rfind("PASS [07] demo: x=1", 0), 0u);
}

TEST(Experiments, AssertionFailuresAreReported) {
    // An unreachable rate target must fail without throwing.
    const auto& e = find_experiment("bvp");
    const auto out = run_experiment(e, resolve_config(e, Json(), Json{{"levels", {4, 8}}, {"l2_rate", 5.0},
                                                                      {"domains", {"interval"}}}));
    EXPECT_FALSE(out.passed);
    EXPECT_FALSE(out.failures.empty());
}

TEST(Experiments, BadModeIsAUsageError) {
    const auto& e = find_experiment("conormal");
    EXPECT_THROW(run_experiment(e, resolve_config(e, Json(), Json{{"check", "sideways"}})), UsageError);
}
