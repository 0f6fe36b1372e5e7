#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "fkummer/cli.hpp"

using namespace fk;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> csv_rows(const std::string& text, std::string* meta = nullptr) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<double>> rows;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.rfind("#", 0) == 0) {
            if (meta) *meta = line;
            continue;
        }
        if (!header) {
            header = true;
            continue;
        }
        std::vector<double> r;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) r.push_back(std::stod(cell));
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("density integrates to one over the emitted grid") {
    const Result r = call({"density", "--dist", "kummer", "--alpha", "2", "--beta", "1", "--gamma", "1"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    CHECK(rows.size() == 2001);
    double integral = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        integral += 0.5 * (rows[i][1] + rows[i - 1][1]) * (rows[i][0] - rows[i - 1][0]);
    CHECK(std::abs(integral - 1) < 1e-3);
}

TEST_CASE("free Poisson header carries the atom") {
    std::string meta;
    const Result r = call({"density", "--dist", "mp", "--lambda", "0.5", "--gamma", "1", "--grid-n", "11"});
    REQUIRE(r.code == 0);
    csv_rows(r.out, &meta);
    CHECK(meta.find("atom0=0.5") != std::string::npos);
}

TEST_CASE("moments of the standard free Poisson law are Catalan numbers") {
    const Result r = call({"moments", "--dist", "mp", "--lambda", "1", "--gamma", "1", "-n", "4"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    const std::vector<double> want{1, 2, 5, 14};
    REQUIRE(rows.size() == 4);
    for (int k = 0; k < 4; ++k) CHECK(rows[k][1] == doctest::Approx(want[k]).epsilon(1e-10));
}

TEST_CASE("endpoints at alpha = 1 match the closed forms") {
    const Result r = call({"endpoints", "--alpha", "1", "--beta", "-5", "--gamma", "1"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    CHECK(std::abs(rows[0][0] - (-1 + std::pow(1 - std::sqrt(6.0), 2))) < 1e-12);
    CHECK(std::abs(rows[0][1] - (-1 + std::pow(1 + std::sqrt(6.0), 2))) < 1e-12);
}

TEST_CASE("subordination table agrees with the series near the origin") {
    const Result r = call({"subordination", "--alpha", "2", "--beta", "0.5", "--gamma", "1", "--z", "-0.05"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0][5] == 1);
    CHECK(rows[0][2] * rows[0][3] == doctest::Approx(rows[0][0] * rows[0][1] / (1 + rows[0][1])).epsilon(1e-10));
}

TEST_CASE("verify suites pass with their default tolerances") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"verify", "hv", "--alpha", "2", "--beta", "0.5", "--gamma", "1", "--order", "8", "--tol", "1e-6"},
             {"verify", "k", "--order", "6", "--seed", "7"},
             {"verify", "characterize", "--case", "2", "--alpha", "2", "--beta", "0.5", "--gamma", "1"},
             {"verify", "partitions", "--seed", "3"}}) {
        const Result r = call(args);
        CAPTURE(args[1]);
        CHECK(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["pass"] == true);
        CHECK(j["results"]["residuals"].size() > 0);
        CHECK(j["version"] == cli_version);
    }
    const auto j = nlohmann::json::parse(call({"verify", "k", "--order", "6", "--seed", "7"}).out);
    CHECK(j["results"]["max_residual"].get<double>() <= 1e-8);
}

TEST_CASE("identical runs give identical bytes") {
    const std::vector<std::string> args{"verify", "subordination", "--seed", "5", "--order", "6"};
    const Result a = call(args), b = call(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("exit codes") {
    CHECK(call({"verify", "hv", "--alpha", "2", "--beta", "0.5", "--gamma", "1", "--tol", "1e-16"}).code == 1);
    const Result bad = call({"density", "--alpha", "2", "--bogus"});
    CHECK(bad.code == 2);
    CHECK(bad.out.empty());
    CHECK_FALSE(bad.err.empty());
    const Result regime = call({"verify", "hv", "--alpha", "1", "--beta", "0.5", "--gamma", "1"});
    CHECK(regime.code == 2);
    CHECK(regime.out.empty());
    CHECK(call({"density", "--alpha", "-1", "--beta", "1", "--gamma", "1"}).code == 2);
    CHECK(call({"verify", "hv", "--alpha", "2", "--beta", "0.5", "--gamma", "1", "--tol", "-1"}).code == 2);
    CHECK(call({"verify", "characterize", "--alpha", "2", "--beta", "0.5", "--gamma", "1"}).code == 2);
    CHECK(call({}).code == 2);
    CHECK(call({"--help"}).code == 0);
}

TEST_CASE("exploratory hv has a null verdict and exits 0") {
    const Result r = call({"verify", "hv", "--alpha", "1.05", "--beta", "0.5", "--gamma", "1", "--exploratory"});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["pass"].is_null());
}

TEST_CASE("order cap from the environment") {
    setenv("FREEKUMMER_MAX_ORDER", "4", 1);
    CHECK(call({"moments", "--dist", "mp", "--lambda", "1", "-n", "6"}).code == 2);
    CHECK(call({"moments", "--dist", "mp", "--lambda", "1", "-n", "4"}).code == 0);
    setenv("FREEKUMMER_MAX_ORDER", "x", 1);
    CHECK(call({"moments", "--dist", "mp", "--lambda", "1", "-n", "4"}).code == 2);
    unsetenv("FREEKUMMER_MAX_ORDER");
}

TEST_CASE("csv output is locale independent and round-trips doubles") {
    const Result r = call({"moments", "--dist", "kummer", "--alpha", "2", "--beta", "0.5", "--gamma", "1", "-n", "3"});
    const auto rows = csv_rows(r.out);
    const auto j = nlohmann::json::parse(
        call({"moments", "--dist", "kummer", "--alpha", "2", "--beta", "0.5", "--gamma", "1", "-n", "3", "--format", "json"}).out);
    for (int k = 0; k < 3; ++k) CHECK(rows[k][1] == j["results"]["rows"][k][1].get<double>());
}

}
