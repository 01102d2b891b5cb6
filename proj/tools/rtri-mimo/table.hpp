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

#pragma once

#include <string>
#include <variant>
#include <vector>

namespace cli {

using Cell = std::variant<std::monostate, long, double, std::string>;

struct PlotHint {
    std::string x;
    std::vector<std::string> y;
    std::vector<std::string> group;
    bool log_y = false;
};

struct Table {
    std::string name; ///< file stem
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    PlotHint plot;

    void add(std::vector<Cell> row);
};

/// CSV with a header row and doubles at 17 significant digits; empty cells for missing values.
std::string render_csv(const Table& t);
/// JSON object {"columns": [...], "rows": [[...], ...]} with null for missing values.
std::string render_json(const Table& t);
/// matplotlib script that renders the table's CSV file.
std::string render_plot_script(const Table& t, const std::string& csv_file);

} // namespace cli
