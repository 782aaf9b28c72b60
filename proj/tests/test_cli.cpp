#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

fs::path work_dir() {
    auto dir = fs::temp_directory_path() / "twist49_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream out;
    out << in.rdbuf();
    return out.str();
}

struct Run {
    int exit_code = -1;
    std::string out;
};

Run run_cli(const std::string& args, const std::string& tag) {
    auto out = work_dir() / (tag + ".out");
    std::string cmd = std::string(TWIST49_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

std::vector<nlohmann::json> lines_of(const std::string& text) {
    std::vector<nlohmann::json> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) out.push_back(nlohmann::json::parse(line));
    return out;
}

}  // namespace

TEST(Cli, VerifyReportIsDeterministicAcrossJobs) {
    auto serial = run_cli("--bound 2000 --jobs 1 verify main4/bw", "bw1");
    auto parallel = run_cli("--bound 2000 --jobs 6 verify main4/bw", "bw6");
    EXPECT_EQ(serial.exit_code, 0);
    EXPECT_EQ(parallel.exit_code, 0);
    EXPECT_EQ(serial.out, parallel.out);
    auto records = lines_of(serial.out);
    ASSERT_FALSE(records.empty());
    for (const auto& r : records)
        for (const char* key : {"family", "label", "claim", "measured", "expected", "tol", "pass"}) EXPECT_TRUE(r.contains(key)) << key;
}

TEST(Cli, ReportPathAppends) {
    auto report = work_dir() / "report.jsonl";
    fs::remove(report);
    auto args = "--bound 60 --report-path " + report.string() + " verify ii";
    auto first = run_cli(args, "append1");
    auto once = slurp(report);
    run_cli(args, "append2");
    EXPECT_EQ(first.exit_code, 0);
    EXPECT_EQ(once, first.out);
    EXPECT_EQ(slurp(report), once + once);
}

TEST(Cli, WaldspurgerListedValues) {
    auto run = run_cli("verify waldspurger --n 5 --n 13 --n 17 --n 29 --n 53 --n 65", "wald");
    EXPECT_EQ(run.exit_code, 0) << run.out;
    for (const auto& r : lines_of(run.out)) EXPECT_TRUE(r["pass"].get<bool>()) << r.dump();
}

TEST(Cli, Subcommands) {
    auto lv = lines_of(run_cli("lvalue 65", "lvalue").out);
    ASSERT_EQ(lv.size(), 1u);
    EXPECT_EQ(lv[0]["lalg"], "2/1");
    EXPECT_EQ(lv[0]["ord2"], 1);

    auto cg = lines_of(run_cli("classgroup -- -35", "classgroup").out);
    ASSERT_EQ(cg.size(), 1u);
    EXPECT_EQ(cg[0]["h"], 2);

    auto sel = run_cli("selmer 53 --oracle", "selmer");
    EXPECT_EQ(sel.exit_code, 0);
    EXPECT_EQ(lines_of(sel.out)[0]["dim2"], 2);

    auto tam = lines_of(run_cli("tamagawa 53", "tamagawa").out);
    EXPECT_EQ(tam[0]["c_map"]["53"], 4);

    auto hg = lines_of(run_cli("heegner 19", "heegner").out);
    EXPECT_FALSE(hg[0]["torsion"].get<bool>());

    auto sc = lines_of(run_cli("--bound 1000 scan main4/bw", "scan").out);
    bool found = false;
    for (const auto& r : sc) found = found || r["M"] == 689;
    EXPECT_TRUE(found);
}

TEST(Cli, ErrorsGiveNonzeroExit) {
    EXPECT_NE(run_cli("verify nonsense", "unknown").exit_code, 0);
    EXPECT_NE(run_cli("lvalue 12", "squarefree").exit_code, 0);
    EXPECT_NE(run_cli("lvalue 5 --precision quad", "precision").exit_code, 0);
}

TEST(Cli, CacheSaveLoadAndTamper) {
    auto cache = work_dir() / "ap_cache.txt";
    fs::remove(cache);
    EXPECT_EQ(run_cli("--bound 300 --cache-path " + cache.string() + " cache save", "save").exit_code, 0);
    auto load = run_cli("--cache-path " + cache.string() + " cache load", "load");
    EXPECT_EQ(load.exit_code, 0);
    EXPECT_EQ(lines_of(load.out)[0]["mismatches"], 0);

    auto text = slurp(cache);
    auto first_break = text.find('\n');
    ASSERT_NE(first_break, std::string::npos);
    std::ofstream(cache) << text.substr(0, first_break + 1) << "abc\n" << text.substr(first_break + 1);
    auto bad = run_cli("--cache-path " + cache.string() + " cache load", "tampered");
    EXPECT_NE(bad.exit_code, 0);
    EXPECT_NE(bad.out.find("line 2"), std::string::npos) << bad.out;
}
