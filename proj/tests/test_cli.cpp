// SPDX-License-Identifier: Apache-2.0
//
// rtri-mimo: training-based MIMO links with residual transmit RF impairments
// Copyright (C) 2026 The rtri-mimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args)
{
    const std::string cmd = std::string(RTRI_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string sha256sum(const fs::path& p)
{
    const std::string cmd = "sha256sum '" + p.string() + "'";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[65] = {};
    const std::size_t n = std::fread(buf, 1, 64, pipe);
    pclose(pipe);
    return std::string(buf, n);
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("rtri-cli-" + tag + "-" + std::to_string(::getpid())))
    {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

const std::string kSmallNmse = "nmse --trials 3000 --snr-db-min 0 --snr-db-max 20 --snr-db-step 10 ";

} // namespace

TEST_CASE("usage errors exit with code 2", "[cli]")
{
    TempDir d("usage");
    CHECK(run("") == 2);
    CHECK(run("bogus") == 2);
    CHECK(run("nmse --no-such-flag --out " + d.str()) == 2);
    CHECK(run("rates --receiver ml --out " + d.str()) == 2);
    CHECK(run("nmse --format xml --out " + d.str()) == 2);
    CHECK(run("nmse --nt 4 --tp 2 --trials 10 --out " + d.str()) == 2);
    CHECK(run("nmse --trials 0 --out " + d.str()) == 2);
    CHECK(run("nmse --preset fig3 --out " + d.str()) == 2);
    CHECK(run("rates --preset fig9 --out " + d.str()) == 2);
    CHECK(run("nmse --delta -0.1 --trials 10 --out " + d.str()) == 2);
    CHECK(run("verify /nonexistent/manifest.json") == 2);
}

TEST_CASE("help and version succeed", "[cli]")
{
    CHECK(run("--help") == 0);
    CHECK(run("--version") == 0);
    CHECK(run("rates --help") == 0);
}

TEST_CASE("CSV output, manifest digests and verify", "[cli]")
{
    TempDir d("csv");
    REQUIRE(run(kSmallNmse + "--delta 0 --delta 0.1 --seed 5 --plot-script --out " + d.str()) == 0);
    const fs::path csv = d.path / "nmse.csv";
    REQUIRE(fs::exists(csv));
    const auto rows = parse_csv(slurp(csv));
    REQUIRE(rows.size() == 1 + 3 * 2);
    CHECK(rows[0] == std::vector<std::string>{"snr_dB", "delta", "nmse_analytic", "nmse_floor", "nmse_empirical",
                                              "nt", "nr", "tp"});
    // The delta = 0 row at 10 dB carries 1/11 at full precision.
    bool found = false;
    for (const auto& r : rows)
        if (r[0] == "10" && r[1] == "0") {
            CHECK(r[2] == "0.090909090909090912");
            found = true;
        }
    CHECK(found);
    for (std::size_t i = 1; i < rows.size(); ++i)
        for (std::size_t c = 0; c < 5; ++c) {
            if (rows[i][c].empty()) continue;
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", std::strtod(rows[i][c].c_str(), nullptr));
            CHECK(rows[i][c] == buf);
        }

    CHECK(fs::exists(d.path / "nmse_plot.py"));
    CHECK(slurp(d.path / "nmse_plot.py").find("nmse.csv") != std::string::npos);

    const fs::path man = d.path / "nmse.manifest.json";
    REQUIRE(fs::exists(man));
    const auto j = nlohmann::json::parse(slurp(man));
    CHECK(j.at("subcommand") == "nmse");
    CHECK(j.at("seed") == 5);
    CHECK(j.at("trials") == 3000);
    CHECK(j.contains("tool_version"));
    CHECK(j.contains("wall_clock_seconds"));
    REQUIRE(j.at("outputs").size() == 2);
    for (const auto& o : j.at("outputs")) {
        const fs::path f = d.path / o.at("file").get<std::string>();
        CHECK(o.at("sha256").get<std::string>() == sha256sum(f));
        CHECK(o.at("bytes").get<std::uintmax_t>() == fs::file_size(f));
    }

    TempDir again("verify");
    CHECK(run("verify " + man.string() + " --out " + again.str()) == 0);
    CHECK(slurp(again.path / "nmse.csv") == slurp(csv));

    {
        std::ofstream tamper(csv, std::ios::app);
        tamper << "0,0,0,0,0,4,4,4\n";
    }
    const nlohmann::json altered = [&] {
        auto m = j;
        m["outputs"][0]["sha256"] = sha256sum(csv);
        return m;
    }();
    std::ofstream(man) << altered.dump(2);
    TempDir third("verify2");
    CHECK(run("verify " + man.string() + " --out " + third.str()) == 1);
}

TEST_CASE("runs are reproducible per seed", "[cli][property]")
{
    TempDir a("seed-a"), b("seed-b"), c("seed-c");
    REQUIRE(run(kSmallNmse + "--seed 9 --threads 1 --out " + a.str()) == 0);
    REQUIRE(run(kSmallNmse + "--seed 9 --threads 3 --out " + b.str()) == 0);
    REQUIRE(run(kSmallNmse + "--seed 10 --out " + c.str()) == 0);
    CHECK(slurp(a.path / "nmse.csv") == slurp(b.path / "nmse.csv"));
    CHECK(slurp(a.path / "nmse.csv") != slurp(c.path / "nmse.csv"));
}

TEST_CASE("JSON output", "[cli]")
{
    TempDir d("json");
    REQUIRE(run("outage --nt 2 --nr 3 --delta 0.1 --trials 2000 --receiver mmse --x-db-min 0 --x-db-max 20 "
                "--x-db-step 10 --format json --out " +
                d.str()) == 0);
    const auto j = nlohmann::json::parse(slurp(d.path / "outage.json"));
    CHECK(j.at("name") == "outage");
    const auto& cols = j.at("columns");
    REQUIRE(cols.size() >= 5);
    CHECK(cols[0] == "threshold");
    CHECK(cols[3] == "outage_analytic");
    REQUIRE(!j.at("rows").empty());
    bool wall = false;
    for (const auto& r : j.at("rows")) {
        REQUIRE(r.size() == cols.size());
        CHECK(r[1] == "mmse");
        if (r[0].get<double>() >= 100.0) {
            CHECK(r[3].get<double>() == 1.0);
            wall = true;
        }
    }
    CHECK(wall);
}

TEST_CASE("rates leave the ceiling empty without impairments", "[cli]")
{
    TempDir d("rates");
    REQUIRE(run("rates --delta 0 --delta 0.1 --tp 4 --trials 2000 --snr-db-min 10 --snr-db-max 10 --out " + d.str()) ==
            0);
    const auto rows = parse_csv(slurp(d.path / "rates.csv"));
    REQUIRE(rows.size() == 1 + 2 * 3);
    CHECK(rows[0][5] == "rate_ceiling");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][2] == "0")
            CHECK(rows[i][5].empty());
        else
            CHECK(std::strtod(rows[i][5].c_str(), nullptr) > std::strtod(rows[i][3].c_str(), nullptr));
    }
}
