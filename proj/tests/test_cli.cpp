#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sl2r/translators.hpp"

#ifndef SL2R_CLI_PATH
#error "SL2R_CLI_PATH must point at the sl2rlab binary"
#endif

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + SL2R_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

fs::path temp_file(const std::string& stem) {
    static int counter = 0;
    return fs::temp_directory_path() / (stem + "-" + std::to_string(::getpid()) + "-" +
                                        std::to_string(counter++));
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

}  // namespace

TEST_CASE("exit codes across the subcommands") {
    CHECK(run_cli("verify frame-metric") == 0);
    CHECK(run_cli("verify no-such-suite") == 2);
    CHECK(run_cli("solve --family Q --field dx --ic y=1 --s-range 0:1") == 2);
    CHECK(run_cli("solve --family K --field dx --ic y=1,phi=0,bogus=3 --s-range 0:1") == 2);
    CHECK(run_cli("solve --family N --field w --ic y=1 --s-range 0:1") == 2);
    CHECK(run_cli("solve --family K --field dx --ic x=0,y=1,phi=0 --s-range zero:1") == 2);
    CHECK(run_cli("residual --surface sigma-theta0 --field v") == 0);
    CHECK(run_cli("residual --surface sigma-x0:0 --field v") == 0);
    CHECK(run_cli("residual --surface sigma-y0:1 --field dx") == 1);
    CHECK(run_cli("residual --surface nowhere --field dx") == 2);
    CHECK(run_cli("residual --surface sigma-y0:1 --field dq") == 2);
    CHECK(run_cli("portrait --grid nonsense") == 2);
    CHECK(run_cli("portrait --grid 1:2:0,0:1:3") == 2);
    CHECK(run_cli("decompose --matrix 1,3,0,1") == 0);
    CHECK(run_cli("decompose --matrix 1,1,1,1") == 2);
    CHECK(run_cli("decompose --matrix 1,0,0") == 2);
    CHECK(run_cli("catalog") == 0);
    CHECK(run_cli("") == 2);
}

TEST_CASE("solve CSV round-trips through full-precision parsing") {
    const fs::path out = temp_file("sl2r-roundtrip");
    REQUIRE(run_cli("solve --family K --field v --ic x=0.5,y=1,phi=0.3 --s-range 0:2 --out \"" +
                    out.string() + "\"") == 0);
    std::ifstream is(out);
    REQUIRE(is.good());
    std::string header;
    std::getline(is, header);
    CHECK(header == "s,x,y,theta,phi,H,residual");

    using namespace sl2r;
    const ReductionSystem rs = make_reduction_system({Family::K, KillingField::V, +1});
    std::string line;
    int rows = 0;
    while (std::getline(is, line)) {
        const auto f = split(line, ',');
        REQUIRE(f.size() == 7);
        CHECK(f[3].empty());  // theta column stays blank for rotational problems
        const double s = std::stod(f[0]);
        const double x = std::stod(f[1]), y = std::stod(f[2]), phi = std::stod(f[4]);
        const double H = std::stod(f[5]), res = std::stod(f[6]);
        const SolveRow row = rs.row(s, {x, y, phi});
        CHECK(std::abs(*row.H - H) < 1e-12);
        CHECK(std::abs(*row.residual - res) < 1e-12);
        ++rows;
    }
    CHECK(rows > 10);
    fs::remove(out);
}

TEST_CASE("solve emits JSON with metadata") {
    const fs::path out = temp_file("sl2r-json");
    REQUIRE(run_cli("solve --family N --field dtheta --ic y=1,theta=0,phi=0.9 --s-range 0:1 "
                    "--format json --out \"" +
                    out.string() + "\"") == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(out));
    CHECK(j.contains("metadata"));
    CHECK(j["metadata"]["family"] == "N");
    CHECK(j["metadata"]["field"] == "dtheta");
    CHECK(j["metadata"]["termination"] == "ReachedEnd");
    REQUIRE(j["records"].is_array());
    CHECK(j["records"].size() > 5);
    CHECK(j["records"][0].contains("phi"));
    fs::remove(out);
}

TEST_CASE("residual report is valid JSON with a certifying orientation") {
    const fs::path out = temp_file("sl2r-res");
    REQUIRE(run_cli("residual --surface sigma-theta0 --field v --grid -1:1:5,0.5:2:5 --out \"" +
                    out.string() + "\"") == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(out));
    CHECK(j["certified"] == true);
    CHECK(j["consistent"] == true);
    CHECK(j["samples"].size() == 25);
    CHECK(std::abs(j["max_abs_residual_closed"].get<double>()) < 1e-10);
    fs::remove(out);
}

TEST_CASE("portrait grid layout and field normalization") {
    const fs::path out = temp_file("sl2r-portrait");
    REQUIRE(run_cli("portrait --grid 0.15:3:20,-3.1:3.1:20 --out \"" + out.string() + "\"") == 0);
    std::ifstream is(out);
    std::string header;
    std::getline(is, header);
    CHECK(header == "y,phi,dy,dphi");
    int rows = 0;
    std::string line;
    double prev_y = -1.0;
    bool row_major = true;
    while (std::getline(is, line)) {
        const auto f = split(line, ',');
        REQUIRE(f.size() == 4);
        const double y = std::stod(f[0]), phi = std::stod(f[1]);
        const double dy = std::stod(f[2]), dphi = std::stod(f[3]);
        // unit-normalized direction proportional to (2 y sin(phi), rate)
        const double nn = std::hypot(dy, dphi);
        CHECK(std::abs(nn - 1.0) < 1e-12);
        const double raw = 2.0 * y * std::sin(phi);
        CHECK(std::abs(dy * std::hypot(raw, -std::sin(phi) / y - 2 * std::cos(phi)) - raw) <
              1e-9);
        row_major = row_major && y >= prev_y - 1e-12;
        prev_y = y;
        ++rows;
    }
    CHECK(rows == 400);
    CHECK(row_major);
    fs::remove(out);

    // a grid touching y = 0 skips the out-of-domain column
    const fs::path out2 = temp_file("sl2r-portrait2");
    REQUIRE(run_cli("portrait --grid 0:1:2,0:0:1 --out \"" + out2.string() + "\"") == 0);
    std::istringstream rows2(slurp(out2));
    std::string l;
    int count = -1;  // header
    while (std::getline(rows2, l)) ++count;
    CHECK(count == 1);
    fs::remove(out2);
}

TEST_CASE("config file values are overridden by flags") {
    const fs::path cfg = temp_file("sl2r-cfg");
    {
        std::ofstream os(cfg);
        os << "family = K\nfield = dx\nic = x=0,y=1,phi=0\ns-range = 0:1\n";
    }
    const fs::path out = temp_file("sl2r-cfg-out");
    CHECK(run_cli("solve --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"") == 0);
    // flag overrides the configured field; an unknown config key is rejected
    CHECK(run_cli("solve --config \"" + cfg.string() + "\" --field dtheta --out \"" +
                  out.string() + "\"") == 0);
    {
        std::ofstream os(cfg, std::ios::app);
        os << "mystery = 1\n";
    }
    CHECK(run_cli("solve --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"") == 2);
    fs::remove(cfg);
    fs::remove(out);
}

TEST_CASE("decompose prints coordinates and the trace class") {
    const fs::path out = temp_file("sl2r-dec");
    const std::string cmd = std::string("\"") + SL2R_CLI_PATH +
                            "\" decompose --matrix 0,2,-0.5,0 > \"" + out.string() + "\" 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("y = 4") != std::string::npos);
    CHECK(text.find("Elliptic") != std::string::npos);
    fs::remove(out);
}
