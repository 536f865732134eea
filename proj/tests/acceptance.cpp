// SPDX-License-Identifier: Apache-2.0
//
// tdba - time-domain beam alignment simulation library
// Copyright (C) 2026 The tdba authors
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

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: tdba_acceptance [criterion ids...]

#include "tdba/validation.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#ifndef TDBA_CLI_PATH
#define TDBA_CLI_PATH "tdba"
#endif

namespace
{

std::string slurp(const std::filesystem::path &p)
{
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// Runs the CLI twice with one seed and compares the files byte for byte.
tdba::Check check_reproducible_cli()
{
    const auto dir = std::filesystem::temp_directory_path() / "tdba_acceptance";
    std::filesystem::create_directories(dir);
    const auto a = dir / "run_a.csv", b = dir / "run_b.csv";
    const std::string base = std::string("\"") + TDBA_CLI_PATH +
                             "\" pd-curve --seed 42 --trials 40 --T 5 10 20 --sweep L --values 1 2 --out ";
    const int ra = std::system((base + "\"" + a.string() + "\"").c_str());
    const int rb = std::system((base + "\"" + b.string() + "\"").c_str());
    const std::string ca = slurp(a), cb = slurp(b);
    const bool ok = ra == 0 && rb == 0 && !ca.empty() && ca == cb;
    return {10, "pd-curve CSV byte-identical across runs", ok,
            "exit codes " + std::to_string(ra) + "/" + std::to_string(rb) + ", " + std::to_string(ca.size()) +
                " bytes, " + (ca == cb ? "identical" : "DIFFERENT")};
}

tdba::Check merge(int id, const std::string &name, const std::vector<tdba::Check> &parts)
{
    tdba::Check out{id, name, true, ""};
    for (const auto &p : parts)
    {
        out.passed = out.passed && p.passed;
        out.detail += (out.detail.empty() ? "" : " | ") + std::string(p.passed ? "" : "FAILED ") + p.name + ": " + p.detail;
    }
    return out;
}

} // namespace

int main(int argc, char **argv)
{
    std::set<int> wanted;
    for (int k = 1; k < argc; ++k)
        wanted.insert(std::atoi(argv[k]));
    auto want = [&](int id) { return wanted.empty() || wanted.count(id) > 0; };

    tdba::McBudget budget; // 500 trials, 10^4 PDP draws, seed 1
    bool all = true;
    auto report = [&](const tdba::Check &c, std::chrono::steady_clock::time_point t0)
    {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << tdba::check_line(c) << " (" << tdba::format_double(secs, "%.1f") << " s)" << std::endl;
        all = all && c.passed;
    };

    try
    {
        if (want(1) || want(2))
        {
            const auto t0 = std::chrono::steady_clock::now();
            const auto curves = tdba::paths_curves(budget);
            if (want(1))
                report(tdba::check_detection(curves), t0);
            if (want(2))
                report(tdba::check_parity(curves), t0);
        }
        if (want(3))
        {
            const auto t0 = std::chrono::steady_clock::now();
            report(tdba::check_spreading(budget), t0);
        }
        if (want(4))
        {
            const auto t0 = std::chrono::steady_clock::now();
            report(tdba::check_robustness(budget), t0);
        }
        if (want(5))
        {
            const auto t0 = std::chrono::steady_clock::now();
            report(tdba::check_chip_duration(budget), t0);
        }
        if (want(6))
        {
            const auto t0 = std::chrono::steady_clock::now();
            report(tdba::check_pdp(budget), t0);
        }
        if (want(7))
        {
            const auto t0 = std::chrono::steady_clock::now();
            report(merge(7, "measurement model fidelity",
                         {tdba::check_energy_identity(), tdba::check_chip_level_equivalence(), tdba::check_mean_model()}),
                   t0);
        }
        if (want(8))
        {
            const auto t0 = std::chrono::steady_clock::now();
            report(tdba::check_nnls(), t0);
        }
        if (want(9))
        {
            const auto t0 = std::chrono::steady_clock::now();
            report(tdba::check_sequences(), t0);
        }
        if (want(10))
        {
            const auto t0 = std::chrono::steady_clock::now();
            report(check_reproducible_cli(), t0);
        }
    }
    catch (const std::exception &e)
    {
        std::cout << "FAIL acceptance runner aborted: " << e.what() << std::endl;
        return 2;
    }
    std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
    return all ? 0 : 1;
}
