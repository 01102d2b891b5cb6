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

#include "table.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace cli {

namespace {

std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_cell(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return "";
            else if constexpr (std::is_same_v<T, long>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, double>) return format_double(v);
            else return v;
        },
        c);
}

nlohmann::json json_cell(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> nlohmann::json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
            else if constexpr (std::is_same_v<T, double>) return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
            else return v;
        },
        c);
}

std::string py_list(const std::vector<std::string>& v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::string("\"") + v[i] + "\"";
    return s + "]";
}

} // namespace

void Table::add(std::vector<Cell> row)
{
    if (row.size() != columns.size()) throw std::logic_error("table row width mismatch in " + name);
    rows.push_back(std::move(row));
}

std::string render_csv(const Table& t)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
        os << '\n';
    }
    return os.str();
}

std::string render_json(const Table& t)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& c : row) r.push_back(json_cell(c));
        rows.push_back(std::move(r));
    }
    nlohmann::json j = {{"name", t.name}, {"columns", t.columns}, {"rows", rows}};
    return j.dump(1) + "\n";
}

std::string render_plot_script(const Table& t, const std::string& csv_file)
{
    std::ostringstream os;
    os << "#!/usr/bin/env python3\n"
       << "# Renders " << csv_file << "; requires matplotlib.\n"
       << "import csv\n"
       << "import sys\n"
       << "from collections import defaultdict\n\n"
       << "import matplotlib.pyplot as plt\n\n"
       << "X = \"" << t.plot.x << "\"\n"
       << "YS = " << py_list(t.plot.y) << "\n"
       << "GROUP = " << py_list(t.plot.group) << "\n\n"
       << "path = sys.argv[1] if len(sys.argv) > 1 else \"" << csv_file << "\"\n"
       << "curves = defaultdict(list)\n"
       << "with open(path, newline=\"\", encoding=\"utf-8\") as f:\n"
       << "    for row in csv.DictReader(f):\n"
       << "        key = tuple(row[g] for g in GROUP)\n"
       << "        curves[key].append(row)\n\n"
       << "fig, ax = plt.subplots()\n"
       << "for key, rows in sorted(curves.items()):\n"
       << "    rows.sort(key=lambda r: float(r[X]))\n"
       << "    xs = [float(r[X]) for r in rows]\n"
       << "    for y in YS:\n"
       << "        pts = [(x, float(r[y])) for x, r in zip(xs, rows) if r[y] not in (\"\", \"nan\")]\n"
       << "        if pts:\n"
       << "            label = \" \".join(f\"{g}={v}\" for g, v in zip(GROUP, key)) + f\" {y}\"\n"
       << "            ax.plot([p[0] for p in pts], [p[1] for p in pts], label=label)\n"
       << "ax.set_xlabel(X)\n"
       << (t.plot.log_y ? "ax.set_yscale(\"log\")\n" : "")
       << "ax.legend(fontsize=\"x-small\")\n"
       << "fig.savefig(path.rsplit(\".\", 1)[0] + \".png\", dpi=150)\n";
    return os.str();
}

} // namespace cli
