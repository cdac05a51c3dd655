#include "confdist/cli.hpp"
#include "confdist/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using confdist::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

// Rows of a CSV body (header excluded, comment lines skipped), split on commas.
std::vector<std::vector<std::string>> rows(const std::string& csv) {
    std::vector<std::vector<std::string>> out;
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        out.push_back(fields);
    }
    return out;
}

std::string header(const std::string& csv) { return csv.substr(0, csv.find('\n')); }

}  // namespace

TEST_CASE("grid and list parsing") {
    CHECK(confdist::cli::parse_grid("-4:4:0.05").size() == 161);
    CHECK(confdist::cli::parse_list("0.1,0.9").size() == 2);
    CHECK_THROWS_AS(confdist::cli::parse_grid("0:1"), confdist::InvalidParameter);
    CHECK_THROWS_AS(confdist::cli::parse_grid("0:1:x"), confdist::InvalidParameter);
    CHECK_THROWS_AS(confdist::cli::parse_list("0.1,,0.9"), confdist::InvalidParameter);
}

TEST_CASE("curve: location identity, bounded and curved examples") {
    const Result loc = call({"curve", "--model", "location:normal", "--y0", "0", "--grid", "-4:4:0.05"});
    REQUIRE(loc.code == 0);
    CHECK(header(loc.out) == "theta,p_value,survivor");
    const auto r = rows(loc.out);
    CHECK(r.size() == 161);
    for (const auto& row : r) CHECK(std::abs(std::stod(row[1]) - std::stod(row[2])) < 1e-9);

    const Result b = call({"curve", "--model", "bounded:0", "--y0", "1", "--grid", "0:5:0.05"});
    REQUIRE(b.code == 0);
    const auto br = rows(b.out);
    CHECK(br[0][1] == "0.8413447461");
    CHECK(br[0][2] == "1");

    const Result c = call({"curve", "--model", "curved", "--r0", "5", "--grid", "0:10:0.1"});
    REQUIRE(c.code == 0);
    CHECK(header(c.out) == "theta,p_value,survivor,s_minus_p");
    for (const auto& row : rows(c.out)) CHECK(std::stod(row[3]) > 0.0);
}

TEST_CASE("coverage examples") {
    const Result b = call({"coverage", "--case", "bounded", "--beta", "0.5", "--theta", "0:6:0.1", "--method", "quad"});
    REQUIRE(b.code == 0);
    CHECK(header(b.out) == "procedure,theta,beta,claimed,actual,method,stderr,n_rep,seed");
    const auto br = rows(b.out);
    CHECK(br.size() == 61);
    CHECK(br[0][4] == "0");
    for (std::size_t i = 1; i < br.size(); ++i) CHECK(std::stod(br[i][4]) < 0.5);

    const Result c = call({"coverage", "--case", "curved", "--beta", "0.1,0.9", "--rho", "0:10:0.1"});
    REQUIRE(c.code == 0);
    CHECK(rows(c.out).size() == 202);

    const Result e = call({"coverage", "--case", "expansion", "--gamma", "1", "--n", "10", "--beta", "0.5",
                           "--theta", "-3:3:0.1", "--method", "both", "--nrep", "2000", "--seed", "4"});
    REQUIRE(e.code == 0);
    const auto er = rows(e.out);
    CHECK(er.size() == 122);
    CHECK(er[1][5] == "monte_carlo");
    CHECK(er[1][8] == "4");
    CHECK(er[3][8] == "5");

    const Result conf = call({"coverage", "--case", "confidence", "--model", "location:ev", "--beta", "0.3",
                              "--theta", "0:1:0.5"});
    REQUIRE(conf.code == 0);
    for (const auto& row : rows(conf.out)) CHECK(std::abs(std::stod(row[4]) - 0.3) < 1e-9);
}

TEST_CASE("figures") {
    const Result f3 = call({"figure", "fig3"});
    REQUIRE(f3.code == 0);
    for (const auto& row : rows(f3.out))
        CHECK(std::abs(std::stod(row[1]) - (std::stod(row[0]) - 1.959963985)) < 1e-8);

    const Result f6 = call({"figure", "fig6"});
    REQUIRE(f6.code == 0);
    CHECK(header(f6.out) == "rho,p,s,error");
    for (const auto& row : rows(f6.out)) CHECK(std::stod(row[3]) > 0.0);

    const Result f9 = call({"figure", "fig9"});
    REQUIRE(f9.code == 0);
    CHECK(header(f9.out) == "y,conf_q,lik_q,bayes_q,vertical_gap");

    const Result a = call({"figure", "fig11", "--nrep", "2000", "--seed", "9"});
    const Result b = call({"figure", "fig11", "--nrep", "2000", "--seed", "9"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(header(a.out) == "theta,beta,claimed,formula_propn,mc_propn,stderr");
    CHECK(rows(a.out).size() == 122);

    for (int i = 1; i <= 11; ++i) {
        if (i == 10 || i == 11) continue;
        CHECK(call({"figure", "fig" + std::to_string(i)}).code == 0);
    }
}

TEST_CASE("prior command") {
    const Result loc = call({"prior", "--model", "location:normal", "--y0", "0.5", "--grid", "-2:2:0.5"});
    REQUIRE(loc.code == 0);
    for (const auto& row : rows(loc.out)) CHECK(std::abs(std::stod(row[1]) - 1.0) < 1e-8);

    const Result cm = call({"prior", "--model", "curvature:1:10", "--y0", "1", "--grid", "-2:3:0.25", "--verify"});
    REQUIRE(cm.code == 0);
    for (const auto& row : rows(cm.out)) {
        const double t = std::stod(row[0]);
        // Exact value 1 + (y0 - t) u / (1 + t u) with u = t / 2n, so the
        // approximation misses (y0 - t) t^3 / (2n)^2 / sigma^2.
        const double u = t / 20.0, s2 = 1.0 + t * u;
        const double remainder = std::abs((1.0 - t) * u * (t * u) / s2);
        CHECK(std::abs(std::stod(row[1]) - (1.0 + (1.0 - t) * u)) <= remainder + 1e-7);
    }
    const auto pos = cm.out.find("# max_abs_discrepancy,");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(cm.out.substr(pos + 22)) < 1e-5);
}

TEST_CASE("quantile command") {
    const Result q = call({"quantile", "--model", "bounded:0", "--y0", "1", "--beta", "0.5,0.9"});
    REQUIRE(q.code == 0);
    const auto r = rows(q.out);
    CHECK(r[0][3] == "1.200173686");
    CHECK(r[1][2] == "1");
}

TEST_CASE("output file") {
    const std::string path = "cli_test_output.csv";
    REQUIRE(call({"--out", path, "figure", "fig6"}).code == 0);
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    CHECK(first == "rho,p,s,error");
    std::remove(path.c_str());
}

TEST_CASE("exit codes") {
    CHECK(call({"--help"}).code == 0);
    CHECK(call({}).code == 2);
    CHECK(call({"bogus"}).code == 2);
    CHECK(call({"figure", "fig12"}).code == 2);
    CHECK(call({"curve", "--model", "location:normal", "--grid", "0:1:0.5"}).code == 2);
    CHECK(call({"curve", "--model", "nope", "--y0", "0", "--grid", "0:1:0.5"}).code == 2);
    CHECK(call({"curve", "--y0", "0", "--grid", "1:0:0.5"}).code == 2);
    CHECK(call({"curve", "--model", "bounded", "--y0", "0", "--grid", "-1:0:0.5"}).code == 2);
    CHECK(call({"coverage", "--case", "nope", "--theta", "0:1:1"}).code == 2);
    CHECK(call({"coverage", "--case", "bounded", "--theta", "0:1:1", "--method", "sometimes"}).code == 2);
    CHECK(call({"coverage", "--case", "bounded", "--theta", "0:1:1", "--nrep", "10"}).code == 2);
    // A zero density at the data makes the sensitivity undefined: the row is
    // emitted empty and the run reports a numeric failure.
    const Result bad = call({"prior", "--model", "location:normal", "--y0", "0", "--grid", "0:60:30"});
    CHECK(bad.code == 3);
    CHECK(rows(bad.out).size() == 3);
    CHECK(rows(bad.out)[2][1].empty());
}
