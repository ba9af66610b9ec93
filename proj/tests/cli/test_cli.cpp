#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

std::string cli_path() {
    const char* env = std::getenv("SPHERECODE_CLI");
    REQUIRE_MESSAGE(env != nullptr, "SPHERECODE_CLI must point at the built binary");
    return env;
}

std::string fixture(const std::string& name) {
    const char* env = std::getenv("SPHERECODE_FIXTURES");
    REQUIRE_MESSAGE(env != nullptr, "SPHERECODE_FIXTURES must point at tests/fixtures");
    return (std::filesystem::path(env) / name).string();
}

RunResult run(const std::string& args, const std::string& env_prefix = "") {
    const std::string command = env_prefix + cli_path() + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    char buffer[4096];
    while (std::size_t got = std::fread(buffer, 1, sizeof(buffer), pipe))
        result.output.append(buffer, got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("validate accepts the orthonormal fixture") {
    const RunResult r =
        run("validate --code " + fixture("orthonormal3.json") + " --angles " +
            fixture("angles_ortho.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("valid") != std::string::npos);
}

TEST_CASE("validate rejects a code against the wrong system") {
    const RunResult r = run("validate --code " + fixture("gap_code.json") + " --angles " +
                            fixture("angles_ortho.json"));
    CHECK(r.exit_code == 1);
}

TEST_CASE("validate reads inline JSON and a gram variant") {
    const RunResult r = run(
        R"(validate --code '{"dim":2,"gram":[[1,-0.5],[-0.5,1]]}' --angles '{"beta":0.5,"angles":[]}')");
    CHECK(r.exit_code == 0);
}

TEST_CASE("validate emits structured JSON") {
    const RunResult r = run("--json validate --code " + fixture("icosahedron.json") +
                            " --angles " + fixture("angles_ico.json"));
    CHECK(r.exit_code == 0);
    const json out = json::parse(r.output);
    CHECK(out["valid"] == true);
    CHECK(out["pairs"].size() == 15);
}

TEST_CASE("validate surfaces schema errors with a diagnostic") {
    const RunResult both = run("validate --code " + fixture("bad_both.json") + " --angles " +
                               fixture("angles_ortho.json"));
    CHECK(both.exit_code == 1);
    CHECK(both.output.find("vectors/gram") != std::string::npos);
    const RunResult neither = run("validate --code " + fixture("bad_neither.json") +
                                  " --angles " + fixture("angles_ortho.json"));
    CHECK(neither.exit_code == 1);
}

TEST_CASE("validate accepts the empty code") {
    const RunResult r = run("validate --code " + fixture("empty_code.json") + " --angles " +
                            fixture("angles_ortho.json"));
    CHECK(r.exit_code == 0);
}

TEST_CASE("the witness-to-validate pipe works") {
    const std::string command = cli_path() + " witness --kind simplex --d 3 | " + cli_path() +
                                R"( validate --angles '{"beta":0.25,"angles":[]}' 2>&1)";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buffer[4096];
    while (std::fread(buffer, 1, sizeof(buffer), pipe) > 0) {
    }
    CHECK(WEXITSTATUS(pclose(pipe)) == 0);
}

TEST_CASE("project through a single pivot") {
    const RunResult r =
        run("project --code " + fixture("icosahedron.json") + " --pivot 0");
    CHECK(r.exit_code == 0);
    const json out = json::parse(r.output);
    CHECK(out["dim"] == 3);
    CHECK(out["vectors"].size() == 5);
}

TEST_CASE("project against a basis") {
    const RunResult r =
        run("project --code " + fixture("orthonormal3.json") + " --basis 0,1");
    CHECK(r.exit_code == 0);
    const json out = json::parse(r.output);
    REQUIRE(out["vectors"].size() == 1);
    CHECK(out["vectors"][0][2].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("project refuses a collinear pivot") {
    const RunResult r = run(
        R"(project --code '{"dim":2,"vectors":[[1,0],[1,0]]}' --pivot 0)");
    CHECK(r.exit_code == 1);
}

TEST_CASE("bound subcommand covers all three kinds") {
    CHECK(run("bound --kind neg --beta 0.3333333333").output == "4\n");
    CHECK(run("bound --kind dgs --d 3 --k 1").output == "4\n");
    CHECK(run("bound --kind dgs --d 1000000 --k 1").output == "1000001\n");
    const RunResult fk = run("--json bound --kind fk --beta 0.5 --k 1");
    CHECK(fk.exit_code == 0);
    const json out = json::parse(fk.output);
    CHECK(out["bound"]["log2"].get<double>() > 36.0);
    CHECK(run("bound --kind nonsense --beta 0.5").exit_code == 1);
}

TEST_CASE("ramsey subcommand finds a pair on the fixture colouring") {
    const RunResult r =
        run("--json ramsey --coloring " + fixture("coloring_k2_n9.json") + " --k 2 --t 1 --m 2");
    CHECK(r.exit_code == 0);
    const json out = json::parse(r.output);
    CHECK(out["found"] == true);
    CHECK(out["X"].size() == 1);
    CHECK(out["Y"].size() == 2);
}

TEST_CASE("ramsey subcommand enforces the hypothesis") {
    const RunResult r =
        run("ramsey --coloring " + fixture("coloring_k2_n9.json") + " --k 2 --t 1 --m 100");
    CHECK(r.exit_code == 1);
}

TEST_CASE("ramsey subcommand reports an honest forced failure") {
    const RunResult r = run("ramsey --coloring " + fixture("coloring_k2_n9.json") +
                            " --k 2 --t 2 --m 9 --force");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("no pair") != std::string::npos);
}

TEST_CASE("decompose writes a verifiable trace and verify re-checks it") {
    const auto trace_path = temp_path("spherecode_cli_trace.json");
    const RunResult dec = run("decompose --code " + fixture("gap_code.json") + " --angles " +
                              fixture("angles_gap.json") + " --out " + trace_path.string());
    CHECK(dec.exit_code == 0);
    CHECK(dec.output.find("GAP_ELL") != std::string::npos);

    const RunResult ver = run("verify --trace " + trace_path.string());
    CHECK(ver.exit_code == 0);

    // fault injection: perturb one stored projected angle by 1e-3
    {
        std::ifstream in(trace_path);
        json trace = json::parse(in);
        auto& angles = trace["root"]["gap"]["formal_angles"];
        angles[angles.size() - 1] = angles[angles.size() - 1].get<double>() + 1e-3;
        std::ofstream out(trace_path, std::ios::trunc);
        out << trace.dump();
    }
    const RunResult bad = run("verify --trace " + trace_path.string());
    CHECK(bad.exit_code == 2);
    CHECK(bad.output.find("FAIL") != std::string::npos);
    std::filesystem::remove(trace_path);
}

TEST_CASE("decompose handles the ramsey fixture as SIZE_TRIVIAL") {
    const RunResult r = run("decompose --code " + fixture("ramsey_code.json") + " --angles " +
                            fixture("angles_ramsey.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("SIZE_TRIVIAL") != std::string::npos);
}

TEST_CASE("decompose --force-t builds a full RAMSEY node") {
    const RunResult r = run(
        R"(decompose --code '{"dim":2,"gram":[[1,0.5],[0.5,1]]}' --angles '{"beta":0.5,"angles":[0.5]}')"
        " --force-t 1");
    CHECK(r.exit_code == 0);
}

TEST_CASE("search finds the Mercedes configuration") {
    const RunResult r = run("search --values=-0.5 --d 2 --nmax 5");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("best_n = 3") != std::string::npos);
    CHECK(r.output.find("exhaustive") != std::string::npos);
}

TEST_CASE("search --json structure and the budget exit code") {
    const RunResult r = run("--json search --values=-0.5,0.5 --d 2 --nmax 5");
    CHECK(r.exit_code == 0);
    const json out = json::parse(r.output);
    CHECK(out["best_n"] == 3);
    CHECK(out["exhaustive"] == true);
    CHECK(out["witness_gram"].size() == 3);

    const RunResult starved =
        run("search --values=-0.41,-0.13,0.17,0.43 --d 5 --nmax 12 --budget 0.0001");
    CHECK(starved.exit_code == 3);
}

TEST_CASE("search accepts a threads override") {
    const RunResult r = run("--threads 2 --json search --values=-0.5,0.5 --d 2 --nmax 4");
    CHECK(r.exit_code == 0);
    CHECK(json::parse(r.output)["best_n"] == 3);
}

TEST_CASE("witness emits loadable codes") {
    const RunResult simplex = run("witness --kind simplex --d 4");
    CHECK(simplex.exit_code == 0);
    CHECK(json::parse(simplex.output)["vectors"].size() == 5);
    const RunResult ico = run("witness --kind icosahedron");
    CHECK(ico.exit_code == 0);
    CHECK(json::parse(ico.output)["dim"] == 3);
    CHECK(run("witness --kind dodecahedron").exit_code == 1);
}

TEST_CASE("SPHERECODE_TOL loosens matching and --tol wins over it") {
    // a pair at 0.5 + 2e-7 only matches a_1 = 0.5 under a loosened tolerance
    const std::string code =
        R"('{"dim":2,"gram":[[1,0.5000002],[0.5000002,1]]}')";
    const std::string angles = R"('{"beta":0.5,"angles":[0.5]}')";
    CHECK(run("validate --code " + code + " --angles " + angles).exit_code == 1);
    CHECK(run("validate --code " + code + " --angles " + angles, "SPHERECODE_TOL=1e-6 ")
              .exit_code == 0);
    CHECK(run("--tol 1e-9 validate --code " + code + " --angles " + angles,
              "SPHERECODE_TOL=1e-6 ")
              .exit_code == 1);
}
