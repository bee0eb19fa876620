#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "hopath/errors.hpp"

using namespace hopath;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "hopath");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    FAIL("missing column " << name);
    return 0;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("range and ladder parsing") {
    const auto r = cli::parse_range("0.5:1.5:0.25");
    CHECK(r.points().size() == 5);
    CHECK(r.points().back() == doctest::Approx(1.5));
    const auto l = cli::parse_ladder("64:4096:2");
    CHECK(l.points() == std::vector<std::size_t>{64, 128, 256, 512, 1024, 2048, 4096});
    CHECK(cli::parse_ladder("3:10:3").points() == std::vector<std::size_t>{3, 9});
    CHECK_THROWS_AS(cli::parse_range("1:0:0.1"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_range("0:1:0"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_range("0:1"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_range("a:1:0.1"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_ladder("1:10:2"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_ladder("4:10:1"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_ladder("8:4:2"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_ladder("-4:10:2"), InvalidArgument);
}

TEST_CASE("kernel at a quarter period") {
    const auto r = run({"kernel", "--omega", "1", "--T", "1.5707963", "--xi", "0", "--xf", "1", "--N", "256"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    const auto& h = rows[0];
    CHECK(rows[1][column(h, "type")] == "regular");
    CHECK(std::stod(rows[1][column(h, "closed_magnitude")]) == doctest::Approx(0.398942).epsilon(1e-6));
    CHECK(std::stod(rows[1][column(h, "closed_phase")]) == doctest::Approx(-0.785398).epsilon(1e-6));
    CHECK(std::stod(rows[1][column(h, "abs_difference")]) < 1e-3);
    CHECK(rows[1][column(h, "mass")] == "1");
    CHECK(rows[1][column(h, "T")] == "1.5707963");
}

TEST_CASE("kernel at a full period is a delta record") {
    const auto r = run({"kernel", "--omega", "1", "--T", "6.2831853", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.size() == 1);
    CHECK(j[0]["type"] == "caustic_delta");
    CHECK(j[0]["parity"] == 1);
    CHECK(j[0]["M"] == 2);
    CHECK(j[0]["closed_maslov_phase"].get<double>() == doctest::Approx(-3.14159).epsilon(1e-5));
    CHECK(j[0]["closed_magnitude"] == "inf");
}

TEST_CASE("free particle kernel") {
    const auto r = run({"kernel", "--omega", "0", "--T", "1.3", "--xi", "0.2", "--xf", "-0.9", "--N", "3"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    CHECK(rows[1][column(rows[0], "type")] == "free_particle");
    CHECK(std::stod(rows[1][column(rows[0], "abs_difference")]) < 1e-12);
}

TEST_CASE("scan reads off the Maslov index") {
    const double a = 0.1 * kPi, b = 3.9 * kPi, step = 0.01 * kPi;
    std::ostringstream range;
    range.precision(17);
    range << a << ":" << b << ":" << step;
    const auto r = run({"scan", "--T-range", range.str(), "--N", "512"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    const auto& h = rows[0];
    const std::size_t wt = column(h, "omegaT_over_pi"), lc = column(h, "L"), cc = column(h, "caustic");
    int flagged = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double x = std::stod(rows[i][wt]);
        if (rows[i][cc] == "1") {
            ++flagged;
            CHECK(std::fabs(x - std::round(x)) < 1e-6);
            continue;
        }
        CHECK(std::stoi(rows[i][lc]) == static_cast<int>(std::floor(x)));
    }
    CHECK(flagged == 3);
}

TEST_CASE("scan phase drops by a quarter turn across a caustic") {
    const double t0 = 0.9 * kPi, t1 = 1.1 * kPi;
    std::ostringstream range;
    range.precision(17);
    range << t0 << ":" << t1 << ":" << (t1 - t0) / 2.0;
    const auto r = run({"scan", "--T-range", range.str()});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 4);
    const std::size_t pc = column(rows[0], "phase");
    CHECK(rows[2][column(rows[0], "caustic")] == "1");
    CHECK(std::stod(rows[3][pc]) - std::stod(rows[1][pc]) == doctest::Approx(-0.5 * kPi).epsilon(1e-12));
}

TEST_CASE("converge reports a fitted slope") {
    const auto r = run({"converge", "--omega", "1", "--T", std::to_string(2.5 * kPi), "--xi", "0.3", "--xf", "-0.7",
                        "--N-ladder", "64:4096:2"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 8);
    const std::size_t ec = column(rows[0], "abs_error"), sc = column(rows[0], "fitted_slope");
    for (std::size_t i = 2; i < rows.size(); ++i) CHECK(std::stod(rows[i][ec]) < std::stod(rows[i - 1][ec]));
    CHECK(rows[1][sc] == "nan");
    CHECK(std::stod(rows.back()[sc]) == doctest::Approx(-1.0).epsilon(0.05));

    const auto caustic = run({"converge", "--T", std::to_string(2 * kPi)});
    CHECK(caustic.code == 2);
    CHECK(caustic.err.find("smear") != std::string::npos);
}

TEST_CASE("smear at caustics") {
    const auto r = run({"smear", "--T", std::to_string(2 * kPi), "--packet-center", "0.5", "--packet-width", "0.2",
                        "--xf", "0.5", "--N-ladder", "256:16384:4"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    const std::size_t dc = column(rows[0], "deviation"), rc = column(rows[0], "reference_re");
    const double f05 = std::pow(kPi * 0.04, -0.25);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][rc]) == doctest::Approx(-f05).epsilon(1e-14));
    for (std::size_t i = 2; i < rows.size(); ++i) CHECK(std::stod(rows[i][dc]) < std::stod(rows[i - 1][dc]));

    const auto odd = run({"smear", "--T", std::to_string(kPi), "--packet-center", "0.7", "--xf", "-0.7", "--format",
                          "json"});
    REQUIRE(odd.code == 0);
    const auto j = nlohmann::json::parse(odd.out);
    CHECK(std::fabs(j[0]["reference_re"].get<double>()) < 1e-15);
    CHECK(j[0]["reference_im"].get<double>() == doctest::Approx(-std::pow(kPi, -0.25)).epsilon(1e-14));
}

TEST_CASE("smear off caustics matches the eigenbasis") {
    const auto r = run({"smear", "--T", std::to_string(2.5 * kPi), "--packet-center", "0.5", "--xf", "0.3",
                        "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const std::complex<double> ref(j[0]["reference_re"].get<double>(), j[0]["reference_im"].get<double>());
    const std::complex<double> eig(j[0]["expansion_re"].get<double>(), j[0]["expansion_im"].get<double>());
    CHECK(std::abs(ref - eig) < 1e-8);
    CHECK(j[0]["caustic"] == false);
}

TEST_CASE("spectrum output") {
    const auto r = run({"spectrum", "--T", std::to_string(2.5 * kPi), "--N", "64"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 64);
    const std::size_t ec = column(rows[0], "eigenvalue"), sc = column(rows[0], "eigenvalue_sturm");
    int neg = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        neg += std::stod(rows[i][ec]) < 0.0;
        CHECK(std::fabs(std::stod(rows[i][ec]) - std::stod(rows[i][sc])) < 1e-10);
    }
    CHECK(neg == 2);
    CHECK(rows[1][column(rows[0], "negative_count")] == "2");
}

TEST_CASE("oracle compare") {
    const auto r = run({"oracle-compare", "--T", "1", "--xi", "0.2", "--xf", "0.4", "--N", "3"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1][column(rows[0], "rel_fresnel_discrete")]) < 1e-6);
    CHECK(run({"oracle-compare", "--N", "5"}).code == 2);
}

TEST_CASE("output is deterministic and can go to a file") {
    const std::vector<std::string> args = {"scan", "--T-range", "0.2:9:0.35", "--xi", "0.1", "--xf", "0.3"};
    const auto a = run(args);
    const auto b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);

    const std::string path = "hopath_cli_test_output.json";
    auto with_out = args;
    with_out.insert(with_out.end(), {"--out", path, "--format", "json"});
    const auto c = run(with_out);
    REQUIRE(c.code == 0);
    CHECK(c.out.empty());
    std::ifstream in(path);
    const auto j = nlohmann::json::parse(in);
    CHECK(j.size() == parse_csv(a.out).size() - 1);
    CHECK(j[0]["command"] == "scan");
    std::remove(path.c_str());
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"kernel", "--mass", "-1"}).code == 2);
    CHECK(run({"kernel", "--N", "1"}).code == 2);
    CHECK(run({"kernel", "--format", "xml"}).code == 2);
    CHECK(run({"kernel", "--omega", "abc"}).code == 2);
    CHECK(run({"scan"}).code == 2);
    CHECK(run({"scan", "--T-range", "1:0:1"}).code == 2);
    CHECK(run({"converge", "--N-ladder", "1:8:2"}).code == 2);
    CHECK(run({"smear", "--packet-width", "0"}).code == 2);
    CHECK(run({"kernel", "--out", "/nonexistent/dir/file.csv"}).code == 2);
    CHECK(run({"kernel", "--help"}).code == 0);
    // the two-step lattice is singular at omega T = 4
    const auto singular = run({"kernel", "--T", "4", "--N", "2"});
    CHECK(singular.code == 3);
    CHECK(singular.err.find("numerical failure") != std::string::npos);
    // an unconverged eigenbasis expansion is reported in its tail column
    const auto rough = run({"smear", "--T", "1", "--packet-width", "0.01", "--n-max", "4", "--format", "json"});
    REQUIRE(rough.code == 0);
    CHECK(nlohmann::json::parse(rough.out)[0]["expansion_tail"].get<double>() > 1e-3);
}

}
