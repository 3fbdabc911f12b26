#include <catch_amalgamated.hpp>

#include <charconv>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "insider/report.hpp"

using namespace insider;

namespace {

ExperimentReport sample_report() {
    ExperimentReport r;
    r.name = "demo";
    r.seed = 9;
    r.add_parameter("T", "1");
    r.add_parameter("alpha", "0.5");
    r.columns = {"x", "n", "ok", "label"};
    r.add_row({0.1, std::int64_t{3}, true, std::string("plain")});
    r.add_row({1e-300, std::int64_t{-4}, false, std::string("a,\"b\"")});
    r.wall_seconds = 12.5;
    return r;
}

}  // namespace

TEST_CASE("doubles print as the shortest round-trip string", "[report]") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-10) == "-2.5e-10");
    CHECK(format_double(8.754570766424171) == "8.754570766424171");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    for (double x : {0.1 + 0.2, 1.0 / 3.0, 6.02214076e23, 4.9e-324}) {
        const std::string s = format_double(x);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == x);
    }
}

TEST_CASE("cells format by type", "[report]") {
    CHECK(format_cell(Cell{true}) == "true");
    CHECK(format_cell(Cell{std::int64_t{42}}) == "42");
    CHECK(format_cell(Cell{std::string("s")}) == "s");
    CHECK(format_cell(Cell{0.25}) == "0.25");
}

TEST_CASE("CSV output quotes only where needed", "[report]") {
    std::ostringstream os;
    write_csv(os, sample_report());
    CHECK(os.str() == "x,n,ok,label\n0.1,3,true,plain\n1e-300,-4,false,\"a,\"\"b\"\"\"\n");
}

TEST_CASE("JSON output keeps column order and omits wall time", "[report]") {
    std::ostringstream os;
    write_json(os, sample_report());
    const auto doc = nlohmann::ordered_json::parse(os.str());
    CHECK(doc["name"] == "demo");
    CHECK(doc["seed"] == 9);
    CHECK(doc["parameters"]["alpha"] == "0.5");
    CHECK(doc["columns"].size() == 4);
    CHECK(doc["rows"][0]["x"] == 0.1);
    CHECK(doc["rows"][1]["ok"] == false);
    CHECK(doc["rows"][1]["label"] == "a,\"b\"");
    CHECK(doc["rows"][0].begin().key() == "x");
    CHECK(os.str().find("wall") == std::string::npos);
}

TEST_CASE("report helpers", "[report]") {
    ExperimentReport r = sample_report();
    CHECK(r.column_index("ok") == 2);
    CHECK_THROWS_AS(r.column_index("missing"), std::out_of_range);
    CHECK_THROWS_AS(r.add_row({1.0}), std::logic_error);
    CHECK(r.all_finite());
    r.add_row({std::numeric_limits<double>::quiet_NaN(), std::int64_t{0}, true, std::string()});
    CHECK_FALSE(r.all_finite());
}
