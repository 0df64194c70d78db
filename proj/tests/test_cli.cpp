#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + GINIBRE_CLI + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("ginibre_cli_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("density table") {
    const Run r = run("density --N 4 --M 2 --grid 1e-2:200:400:log");
    REQUIRE(r.status == 0);
    CHECK(r.out.rfind("# ginibre density schema=1 N=4 M=2 rescaled=0\n", 0) == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 401);
    CHECK(rows[0] == std::vector<std::string>{"s", "r1"});
    CHECK(std::stod(rows[1][0]) == 0.01);
    CHECK(std::stod(rows[400][0]) == 200.0);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][1]) >= 0.0);
}

TEST_CASE("moments table") {
    const Run r = run("moments --N 2 --M 2 --k 1,2");
    REQUIRE(r.status == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][1] == "4");
    CHECK(rows[2][1] == "52");

    const Run j = run("moments --N 2 --M 2 --k 2 --format json");
    REQUIRE(j.status == 0);
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["command"] == "moments");
    CHECK(doc["rows"][0]["exact"] == "52");
    CHECK(doc["rows"][0]["closed"] == 52.0);
}

TEST_CASE("mutual information sweep with Monte Carlo") {
    const Run r = run("mi --N 2 --M 3 --gamma-db 0,10,20 --mc-trials 100000 --seed 7");
    REQUIRE(r.status == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"gamma_db", "mi_analytic", "mi_mc_mean", "mi_mc_stderr"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double a = std::stod(rows[i][1]), m = std::stod(rows[i][2]), se = std::stod(rows[i][3]);
        CHECK(std::abs(a - m) < 3.0 * se);
    }
    const Run bits = run("mi --N 2 --M 3 --gamma-db 10 --bits");
    const Run nats = run("mi --N 2 --M 3 --gamma-db 10");
    CHECK(std::stod(csv_rows(bits.out)[1][1]) == doctest::Approx(std::stod(csv_rows(nats.out)[1][1]) / std::log(2.0)));
}

TEST_CASE("identical configurations give identical files") {
    const fs::path d = scratch("repro");
    const std::string base = "simulate --N 3 --M 2 --trials 500 --seed 9 --output ";
    REQUIRE(run(base + (d / "a.csv").string() + " --workers 1").status == 0);
    REQUIRE(run(base + (d / "b.csv").string() + " --workers 1").status == 0);
    REQUIRE(run(base + (d / "c.csv").string() + " --workers 3").status == 0);
    CHECK(slurp(d / "a.csv") == slurp(d / "b.csv"));
    CHECK(slurp(d / "a.csv") == slurp(d / "c.csv"));
    const std::string dens = "density --N 3 --M 3 --grid 0.1:30:50 --output ";
    REQUIRE(run(dens + (d / "d1.csv").string()).status == 0);
    REQUIRE(run(dens + (d / "d2.csv").string() + " --workers 4").status == 0);
    CHECK(slurp(d / "d1.csv") == slurp(d / "d2.csv"));
    fs::remove_all(d.parent_path());
}

TEST_CASE("default output directory") {
    const fs::path d = scratch("envdir");
    REQUIRE(run("limit --M 2 --grid 0.5:6:12", "GINIBRE_OUTPUT_DIR=" + d.string()).status == 0);
    const auto rows = csv_rows(slurp(d / "limit.csv"));
    REQUIRE(rows.size() == 13);
    REQUIRE(run("kernel --N 2 --M 2 --which H10 --first 1 --second 1 -o k.json --format json",
                "GINIBRE_OUTPUT_DIR=" + d.string())
                .status == 0);
    const auto doc = nlohmann::json::parse(slurp(d / "k.json"));
    CHECK(doc["rows"][0]["value"].get<double>() == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    fs::remove_all(d.parent_path());
}

TEST_CASE("exit codes") {
    CHECK(run("").status == 2);
    CHECK(run("frobnicate").status == 2);
    CHECK(run("density --N 2 --M 2").status == 2);
    CHECK(run("density --N 2 --M 2 --grid 1:2").status == 2);
    CHECK(run("density --N 20 --M 2 --grid 1:2:3").status == 3);
    CHECK(run("density --N 2 --M 2 --grid 0:2:3").status == 3);
    CHECK(run("mi --N 11 --M 2 --gamma-db 0").status == 3);
    CHECK(run("jpdf --N 2 --M 2 --points 1,1").status == 0);
    CHECK(run("simulate --N 2 --M 2 --trials 0").status == 3);
    CHECK(run("density --N 2 --M 2 --grid 1:2:3 --output /proc/none/x.csv").status == 4);
    CHECK(run("--help").status == 0);
}

TEST_CASE("presets") {
    const Run r = run("density --preset fig1 --grid 0.5:20:5");
    REQUIRE(r.status == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == std::vector<std::string>{"s", "r1_M1", "r1_M2", "r1_M3"});
    const Run f2 = run("density --preset fig2 --grid 0.5:3:3");
    REQUIRE(f2.status == 0);
    CHECK(csv_rows(f2.out)[0].size() == 11);
}
