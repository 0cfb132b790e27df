// End-to-end checks of the mrdcf binary: exit codes, file outputs, and
// reproducibility of the emitted data files. The binary path arrives as the
// test's command-line argument.
#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string g_binary;

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string cmd = g_binary + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    std::string output;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) output += buf.data();
    const int status = pclose(pipe);
    return RunResult{WEXITSTATUS(status), output};
}

fs::path temp_dir() {
    auto dir = fs::temp_directory_path() / "mrdcf_cli_test";
    fs::create_directories(dir);
    return dir;
}

fs::path write_scenario_a(const fs::path& dir) {
    const auto path = dir / "scenario_a.conf";
    std::ofstream out(path);
    out << "label = scenario A\n"
        << "[station]\nlambda_pps = 500\nbit_rate_bps = 11e6\n"
        << "[station]\nlambda_pps = 500\nbit_rate_bps = 11e6\n"
        << "[station]\nlambda_pps = 1000\nbit_rate_bps = 1e6\n";
    return path;
}

std::string strip_timestamp(const fs::path& file) {
    std::ifstream in(file);
    std::ostringstream kept;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# timestamp:", 0) == 0) continue;
        kept << line << "\n";
    }
    return kept.str();
}

}  // namespace

int main(int argc, char** argv) {
    REQUIRE(argc >= 2);
    g_binary = argv[1];
    doctest::Context ctx;
    ctx.applyCommandLine(1, argv);
    return ctx.run();
}

TEST_CASE("model mode prints the reference aggregate and writes CSV") {
    const auto dir = temp_dir();
    const auto scenario = write_scenario_a(dir);
    const auto r = run("model --scenario " + scenario.string() + " --out " +
                       (dir / "m").string());
    CHECK(r.exit_code == 0);
    // 1.89 Mbps +- 15% leaves the output in the 1.6..2.2 Mbps band
    CHECK(r.output.find("aggregate 1.9") != std::string::npos);
    CHECK(r.output.find("jain(normalized) 0.4") != std::string::npos);
    CHECK(fs::exists(dir / "m" / "model.csv"));
    const auto body = strip_timestamp(dir / "m" / "model.csv");
    CHECK(body.find("# mrdcf") != std::string::npos);
    CHECK(body.find("# scenario_hash:") != std::string::npos);
    CHECK(body.find("station,tau") != std::string::npos);
}

TEST_CASE("data files reproduce byte-identically modulo the timestamp") {
    const auto dir = temp_dir();
    const auto scenario = write_scenario_a(dir);
    const auto out1 = dir / "r1";
    const auto out2 = dir / "r2";
    const std::string args = " --duration 5 --reps 2 --seed 99 --scenario " +
                             scenario.string();
    CHECK(run("simulate" + args + " --out " + out1.string()).exit_code == 0);
    CHECK(run("simulate" + args + " --out " + out2.string()).exit_code == 0);
    CHECK(strip_timestamp(out1 / "simulate.csv") == strip_timestamp(out2 / "simulate.csv"));
}

TEST_CASE("simulate --raw emits per-replication metric rows") {
    const auto dir = temp_dir();
    const auto scenario = write_scenario_a(dir);
    const auto out = dir / "raw";
    const auto r = run("simulate --scenario " + scenario.string() +
                       " --duration 4 --reps 2 --raw --out " + out.string());
    CHECK(r.exit_code == 0);
    const auto body = strip_timestamp(out / "simulate_raw.csv");
    CHECK(body.find("replication,station,metric,value") != std::string::npos);
    CHECK(body.find("0,1,throughput_bps,") != std::string::npos);
    CHECK(body.find("1,3,generated,") != std::string::npos);
}

TEST_CASE("optimize mode reports windows and predicted throughput") {
    const auto dir = temp_dir();
    const auto scenario = write_scenario_a(dir);
    const auto r = run("optimize --criterion mlpf --scenario " + scenario.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("criterion 4-MLPF") != std::string::npos);
    CHECK(r.output.find("W0(real)") != std::string::npos);
    CHECK(r.output.find("predicted aggregate") != std::string::npos);
}

TEST_CASE("malformed scenario files name the offending line, exit code 3") {
    const auto dir = temp_dir();
    const auto path = dir / "broken.conf";
    {
        std::ofstream out(path);
        out << "[station]\nlambda_pps = 500\nbit_rate_bps = 11e6\nnot a key value\n";
    }
    const auto r = run("model --scenario " + path.string());
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("line 4") != std::string::npos);
}

TEST_CASE("missing scenario file exits with the scenario error class") {
    const auto r = run("model --scenario /nonexistent/file.conf");
    CHECK(r.exit_code == 3);
}

TEST_CASE("usage errors exit with code 2, unknown target with 5") {
    CHECK(run("model").exit_code == 2);           // missing required --scenario
    CHECK(run("frobnicate").exit_code == 2);      // unknown subcommand
    CHECK(run("reproduce fig9 --reps 1 --duration 3").exit_code == 5);
}

TEST_CASE("sweep emits one row per point") {
    const auto dir = temp_dir();
    const auto scenario = write_scenario_a(dir);
    const auto out = dir / "sweep";
    const auto r = run("model --scenario " + scenario.string() +
                       " --sweep 3:lambda:100:1000:4 --out " + out.string());
    CHECK(r.exit_code == 0);
    std::ifstream in(out / "model_sweep.csv");
    std::string line;
    int data_rows = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.rfind('#', 0) == 0) continue;
        if (!header_seen) {
            header_seen = true;
            CHECK(line.rfind("lambda,", 0) == 0);
            continue;
        }
        if (!line.empty()) ++data_rows;
    }
    CHECK(data_rows == 4);
}

TEST_CASE("reproduce table1 renders both scenarios and all four setups") {
    const auto dir = temp_dir();
    const auto out = dir / "repro";
    const auto r = run("reproduce table1 --duration 8 --reps 2 --seed 5 --out " +
                       out.string());
    CHECK(r.exit_code == 0);
    const auto body = strip_timestamp(out / "table1.csv");
    for (const char* needle : {"A,1-DCF", "A,2-PF", "A,3-LPF", "A,4-MLPF", "B,1-DCF",
                               "B,4-MLPF"}) {
        CAPTURE(needle);
        CHECK(body.find(needle) != std::string::npos);
    }
}
