#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun run(const std::string &args) {
    const std::string cmd = std::string(SYMPORDER_CLI) + " " + args + " 2>/dev/null";
    CliRun r;
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data_file(const std::string &name) { return std::string(SYMPORDER_DATA) + "/" + name; }

std::string temp_file(const std::string &name, const std::string &content) {
    const auto p = std::filesystem::temp_directory_path() / ("symporder_cli_" + name);
    std::ofstream(p) << content;
    return p.string();
}

nlohmann::json parse(const CliRun &r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, MaslovOfStoredRotationLoop) {
    const CliRun r = run("maslov --path " + data_file("rotation_loop.json"));
    ASSERT_EQ(r.code, 0);
    const auto j = parse(r);
    EXPECT_NEAR(j["results"]["value"].get<double>(), 6.283185307179586, 1e-9);
    EXPECT_NEAR(j["results"]["turns"].get<double>(), 1.0, 1e-10);
    EXPECT_NE(j["convention"].get<std::string>().find("radians"), std::string::npos);
    EXPECT_EQ(j["command"], "maslov");
}

TEST(Cli, RotationDistanceOfCosine) {
    const CliRun r = run("rot-distance --s 2 --func " + data_file("cos_grid.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(parse(r)["results"]["value"].get<double>(), 0.5493061443340549, 1e-12);
}

TEST(Cli, OutputIsDeterministicAndRoundTrips) {
    const CliRun a = run("quant-gamma --a " + data_file("cos_grid.json") + " --s 2 --b " + data_file("cos_grid.json") +
                      " --t 3 --nmax 1000");
    const CliRun b = run("quant-gamma --a " + data_file("cos_grid.json") + " --s 2 --b " + data_file("cos_grid.json") +
                      " --t 3 --nmax 1000");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const auto j = parse(a);
    EXPECT_EQ(j.dump(2) + "\n", a.out);
    EXPECT_EQ(j["results"]["gamma_n"].size(), 4u);
}

TEST(Cli, OutFlagWritesFile) {
    const auto out = (std::filesystem::temp_directory_path() / "symporder_cli_out.json").string();
    const CliRun r = run("cone --path " + data_file("rotation_loop.json") + " --out " + out);
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(out);
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["results"]["status"], "dominant");
}

TEST(Cli, SynthesizeRedistributeEmbedCw) {
    const std::string m = temp_file("m.json", R"({"dim": 2, "matrix": [4, 0, 0, 0.25]})");
    CliRun r = run("synth-positive --matrix " + m + " --grid 64");
    ASSERT_EQ(r.code, 0);
    EXPECT_LT(parse(r)["results"]["endpoint_error"].get<double>(), 1e-8);

    const std::string h = temp_file("h.json", R"({"n": 2, "real": [1, 0, 0, 2], "imag": [0, 0, 0, 0]})");
    r = run("redistribute --hermitian " + h + " --target " + std::to_string(3.0 + 2 * 6.283185307179586));
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(parse(r)["results"]["trace"].get<double>(), 3.0 + 4 * M_PI, 1e-9);

    r = run("embed --func " + data_file("cos_grid.json") + " --other " + data_file("cos_grid.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(parse(r)["results"]["k"].get<double>(), 0.0, 1e-15);

    const std::string fam =
        temp_file("fam.json", R"({"grid_shape": [2], "values": [[1, -1], [2, -2], [0.5, -0.5]], "times": [0, 0.3, 1]})");
    r = run("cw --family " + fam);
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(parse(r)["results"]["value"].get<double>(), 0.0, 1e-15);
}

TEST(Cli, LinearGrowthCommands) {
    const std::string loop = data_file("rotation_loop.json");
    CliRun r = run("gamma --x " + loop + " --y " + loop + " --nmax 4");
    ASSERT_EQ(r.code, 0);
    auto j = parse(r);
    EXPECT_NEAR(j["results"]["closed_form"].get<double>(), 1.0, 1e-9);
    EXPECT_EQ(j["results"]["gamma_n"].back()["gamma_n"], 4);

    r = run("kdist --x " + loop + " --y " + loop + " --defect 0.5 --kmax 4");
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(parse(r)["results"]["value"].get<double>(), 0.0, 1e-12);

    r = run("zcoord --path " + loop + " --defect 0.5 --kmax 2");
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(parse(r)["results"]["value"].get<double>(), std::log(2 * M_PI), 1e-9);

    r = run("order --lower " + loop + " --upper " + loop);
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(parse(r)["results"]["certificate"]["certified"].get<bool>());

    r = run("defect-sample --dim 2 --pairs 4 --family loops --seed 3");
    ASSERT_EQ(r.code, 0);
    EXPECT_LT(parse(r)["results"]["defect"].get<double>(), 1e-8);
}

TEST(Cli, VerifyLinearSuite) {
    const CliRun r = run("verify --suite linear --seed 7");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = parse(r);
    EXPECT_TRUE(j["results"]["passed"].get<bool>());
    EXPECT_EQ(j["results"]["criteria"].size(), 7u);
}

TEST(Cli, ErrorExitCodes) {
    EXPECT_EQ(run("maslov --path /nonexistent.json").code, 1);
    EXPECT_EQ(run("maslov").code, 1);
    EXPECT_EQ(run("no-such-command").code, 1);
    const std::string bad = temp_file("bad.json", "{\n \"dim\": 2,\n \"times\": [0, 1\n}");
    EXPECT_EQ(run("maslov --path " + bad).code, 1);
    EXPECT_EQ(run("rot-distance --s 0.5 --func " + data_file("cos_grid.json")).code, 1);  // domain error
    const std::string coarse = temp_file(
        "coarse.json", R"({"dim": 2, "times": [0, 0.5, 1], "matrices": [[1,0,0,1],[-1,0,0,-1],[1,0,0,1]]})");
    EXPECT_EQ(run("maslov --path " + coarse).code, 2);  // a half-turn step cannot be resolved
}
