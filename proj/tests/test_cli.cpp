#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string cli = GRAPHWAVE_CLI_PATH;
const std::string fixtures = GRAPHWAVE_FIXTURES;

int run(const std::string& args, const std::string& out_dir)
{
    const std::string cmd = cli + " --out " + out_dir + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("validate exit codes")
{
    CHECK(run("validate " + fixtures + "/tadpole.graph", "/tmp/gw_cli") == 0);
    CHECK(run("validate " + fixtures + "/disconnected.graph", "/tmp/gw_cli") == 1);
    CHECK(run("validate " + fixtures + "/badlength.graph", "/tmp/gw_cli") == 1);
    CHECK(run("validate " + fixtures + "/missing.graph", "/tmp/gw_cli") == 2);
}

TEST_CASE("solve writes a wave and identical reruns give identical bytes")
{
    REQUIRE(run("solve " + fixtures + "/line.graph --p 1 --omega -1 --seed soliton:right:0",
                "/tmp/gw_cli_a") == 0);
    REQUIRE(run("solve " + fixtures + "/line.graph --p 1 --omega -1 --seed soliton:right:0",
                "/tmp/gw_cli_b") == 0);
    const auto a = slurp("/tmp/gw_cli_a/wave.csv");
    const auto b = slurp("/tmp/gw_cli_b/wave.csv");
    CHECK(!a.empty());
    CHECK(a == b);
    CHECK(a.substr(0, 12) == "edge,x,re,im");
}

TEST_CASE("branch on the tadpole: monotone mass, no folds")
{
    REQUIRE(run("branch " + fixtures +
                    "/tadpole.graph --p 1 --omega-from -16 --omega-to -0.5 --seed dtn:loop",
                "/tmp/gw_cli_br") == 0);
    std::ifstream in("/tmp/gw_cli_br/branch.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "omega,mass,energy,residual,fold");
    double prev_omega = -1e9, prev_mass = -1e9;
    int rows = 0;
    std::string line;
    bool monotone = true;
    while (std::getline(in, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double om, mass, energy, resid;
        int fold;
        ss >> om >> mass >> energy >> resid >> fold;
        CHECK(fold == 0);
        if (rows > 0 && !(om > prev_omega && mass < prev_mass)) monotone = false;
        prev_omega = om;
        prev_mass = mass;
        ++rows;
    }
    CHECK(rows >= 10);
    CHECK(monotone); // mass decreases toward omega -> 0 on the single-pulse branch
}

TEST_CASE("stability verdict json on the tadpole")
{
    REQUIRE(run("stability " + fixtures + "/tadpole.graph --p 1 --omega -4 --seed dtn:loop",
                "/tmp/gw_cli_st") == 0);
    const auto json = slurp("/tmp/gw_cli_st/stability.json");
    CHECK(json.find("\"verdict\": \"stable\"") != std::string::npos);
    CHECK(json.find("\"n_plus\": 1") != std::string::npos);
}

TEST_CASE("dumbbell three-pulse verdict through the pipeline")
{
    REQUIRE(run("stability " + fixtures +
                    "/dumbbell.graph --p 1 --omega -4 --seed dtn:loopA,bridge,loopB",
                "/tmp/gw_cli_db") == 0);
    const auto json = slurp("/tmp/gw_cli_db/stability.json");
    CHECK(json.find("\"verdict\": \"unstable\"") != std::string::npos);
    CHECK(json.find("\"n_plus\": 5") != std::string::npos);
}

TEST_CASE("period scan emits the full grid")
{
    REQUIRE(run("--jobs 2 period-scan --n 6", "/tmp/gw_cli_ps") == 0);
    std::ifstream in("/tmp/gw_cli_ps/period_scan.csv");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 37); // header + 36 grid points
}
