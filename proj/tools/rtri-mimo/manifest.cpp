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

#include "manifest.hpp"

#include "rtri/rtri.h"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace cli {

namespace {

constexpr const char* kToolVersion = "1.0.0";

std::string utc_now()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

} // namespace

std::string sha256_hex(const std::string& data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return os.str();
}

std::string sha256_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

std::string manifest_name(const std::string& command) { return command + ".manifest.json"; }

nlohmann::json make_manifest(const RunOptions& opt, const std::vector<OutputFile>& outputs, double wall_seconds,
                             const nlohmann::json& notes)
{
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : outputs) files.push_back({{"file", f.file}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    return {
        {"subcommand", opt.command},
        {"parameters", to_json(opt)},
        {"seed", opt.seed},
        {"trials", opt.trials},
        {"tool_version", kToolVersion},
        {"library_version", rtri_version()},
        {"written_utc", utc_now()},
        {"wall_clock_seconds", wall_seconds},
        {"outputs", files},
        {"notes", notes},
    };
}

} // namespace cli
