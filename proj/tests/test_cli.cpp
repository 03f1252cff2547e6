#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "qspectra/config.hpp"
#include "qspectra/run.hpp"

using namespace qspectra::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
    int status;
    std::string out;
    std::string err;
};

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("qspectra_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Result invoke(const std::string& args) {
    const auto out = scratch() / "stdout.txt";
    const auto err = scratch() / "stderr.txt";
    const std::string cmd = std::string(QSPECTRA_CLI_PATH) + " " + args + " >" + out.string() +
                            " 2>" + err.string();
    const int raw = std::system(cmd.c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> data_rows(const std::string& csv) {
    std::vector<std::string> out;
    for (auto& l : lines(csv))
        if (!l.empty() && l[0] != '#') out.push_back(l);
    return out;
}

}  // namespace

TEST(Config, ParsesKeyValueText) {
    const auto kv = parse_config_text("# comment\nE_J = 50\n\n n_g=0.25 # trailing\n");
    EXPECT_EQ(kv.at("E_J"), "50");
    EXPECT_EQ(kv.at("n_g"), "0.25");
    EXPECT_THROW(parse_config_text("E_J 50\n"), ValidationError);
    EXPECT_THROW(parse_number("E_J", "5x"), ValidationError);
    EXPECT_THROW(parse_integer("M", "4.5"), ValidationError);
}

TEST(Config, ResolvesDefaultsAndSweeps) {
    const auto cfg = resolve_config(Command::CpbLevels, {{"out", "x.csv"}});
    ASSERT_TRUE(cfg.sweep.has_value());
    EXPECT_EQ(cfg.sweep->key, "n_g");
    EXPECT_EQ(cfg.sweep->steps, 101);
    EXPECT_DOUBLE_EQ(cfg.sweep->value(100), 1.0);
    EXPECT_DOUBLE_EQ(cfg.sweep->value(50), 0.5);
    EXPECT_EQ(cfg.number("E_J"), 50.0);

    EXPECT_THROW(resolve_config(Command::CpbLevels, {{"out", "x"}, {"bogus", "1"}}), ValidationError);
    EXPECT_THROW(resolve_config(Command::CpbLevels, {{"out", "x"}, {"sweep.steps", "1"}}), ValidationError);
    EXPECT_THROW(resolve_config(Command::CpbLevels, {}), ValidationError);
    EXPECT_THROW(resolve_config(Command::JunctionParity, {{"out", "x"}, {"sweep.stop", "6.5"}}),
                 ValidationError);
    const auto none = resolve_config(Command::CpbLevels, {{"out", "x"}, {"sweep.key", "none"}});
    EXPECT_FALSE(none.sweep.has_value());
    EXPECT_THROW(parse_command("nope"), ValidationError);
    EXPECT_EQ(command_names().size(), 8u);
}

TEST(Config, NumbersRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(Cli, CpbLevelsSchema) {
    const auto csv = scratch() / "cpb.csv";
    const auto svg = scratch() / "cpb.svg";
    const auto r = invoke("cpb-levels --set E_J=50 --out " + csv.string() + " --svg " + svg.string());
    ASSERT_EQ(r.status, 0) << r.err;
    const auto text = slurp(csv);
    ASSERT_EQ(text.front(), '#');
    EXPECT_NE(text.find("# E_J = 50\n"), std::string::npos);
    EXPECT_NE(text.find("# sweep.key = n_g\n"), std::string::npos);
    const auto rows = data_rows(text);
    ASSERT_EQ(rows.size(), 102u);
    EXPECT_EQ(rows[0], "n_g,E0,E1,E2,E3,E4");
    EXPECT_EQ(rows[1].substr(0, 2), "0,");
    EXPECT_EQ(rows.back().substr(0, 2), "1,");
    EXPECT_EQ(text.find('\r'), std::string::npos);
    EXPECT_EQ(slurp(svg).substr(0, 4), "<svg");
}

TEST(Cli, JunctionLevelsSchema) {
    const auto cfg = scratch() / "junction.cfg";
    std::ofstream(cfg) << "# four-site cell, two insulating layers\nM = 4\nL_F = 2\n";
    const auto csv = scratch() / "jl.csv";
    const auto r = invoke("junction-levels --config " + cfg.string() + " --out " + csv.string());
    ASSERT_EQ(r.status, 0) << r.err;
    const auto rows = data_rows(slurp(csv));
    ASSERT_GT(rows.size(), 65u);
    EXPECT_EQ(rows[0], "phi,l,m,n,energy,delta_lm");
    EXPECT_NE(slurp(csv).find("# L_F = 2\n"), std::string::npos);
}

TEST(Cli, ByteIdenticalForSameSeed) {
    const auto a = scratch() / "a.csv", b = scratch() / "b.csv", c = scratch() / "c.csv";
    ASSERT_EQ(invoke("basis-map --set draws=200 --seed 7 --out " + a.string()).status, 0);
    ASSERT_EQ(invoke("basis-map --set draws=200 --seed 7 --out " + b.string()).status, 0);
    ASSERT_EQ(invoke("basis-map --set draws=200 --seed 8 --out " + c.string()).status, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_NE(data_rows(slurp(a)), data_rows(slurp(c)));
    EXPECT_EQ(data_rows(slurp(a))[0], "draw,energy,z,det_rel,condition,inverse_residual,transport_residual,status");
}

TEST(Cli, OracleCompareOnCpbGrid) {
    const auto csv = scratch() / "oracle.csv";
    const auto r = invoke("oracle-compare --out " + csv.string());
    ASSERT_EQ(r.status, 0) << r.err;
    const auto pos = r.out.find("max_relative_deviation = ");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_LT(std::stod(r.out.substr(pos + 25)), 1e-8);
    EXPECT_EQ(data_rows(slurp(csv)).size(), 1u + 4 * 11 * 5);
}

TEST(Cli, ExitStatuses) {
    const auto csv = scratch() / "e.csv";
    auto r = invoke("cpb-levels --set bogus=1 --out " + csv.string());
    EXPECT_EQ(r.status, 2);
    EXPECT_EQ(r.err.rfind("error code=2 kind=validation", 0), 0u) << r.err;

    EXPECT_EQ(invoke("not-a-command --out " + csv.string()).status, 2);
    EXPECT_EQ(invoke("cpb-levels").status, 2);
    EXPECT_EQ(invoke("cpb-levels --set sweep.steps=1 --out " + csv.string()).status, 2);
    EXPECT_EQ(invoke("cpb-levels --set E_C=-1 --out " + csv.string()).status, 2);
    EXPECT_EQ(invoke("junction-levels --set M=1 --out " + csv.string()).status, 2);

    r = invoke("basis-map --set source=junction --set l=2 --set m=2 --out " + csv.string());
    EXPECT_EQ(r.status, 3);
    EXPECT_EQ(r.err.rfind("error code=3 kind=computation", 0), 0u) << r.err;

    r = invoke("cpb-levels --out " + (scratch() / "missing" / "x.csv").string());
    EXPECT_EQ(r.status, 4);
    EXPECT_EQ(r.err.rfind("error code=4 kind=io", 0), 0u) << r.err;
}

TEST(Run, LibraryEntryPointWritesCsv) {
    const auto csv = scratch() / "lib.csv";
    auto cfg = resolve_config(Command::CpbAnharmonicity,
                              {{"out", csv.string()}, {"sweep.start", "10"}, {"sweep.stop", "20"},
                               {"sweep.steps", "3"}});
    std::ostringstream out, err;
    ASSERT_EQ(run(cfg, out, err), kExitOk) << err.str();
    const auto rows = data_rows(slurp(csv));
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "E_J,EJ_over_EC,E01,alpha,alpha_rel");
    EXPECT_EQ(rows[2].substr(0, 3), "15,");
}
