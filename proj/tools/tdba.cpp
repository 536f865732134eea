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

// Command line front end: P_D curves, the solver comparison, the chip
// duration sweep, power delay profiles and the property suites.

#include "tdba/experiments.hpp"
#include "tdba/io.hpp"
#include "tdba/validation.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>

namespace
{

struct Common
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::string out = "-";
    std::string format = "csv";
    int threads = 1;
    std::vector<std::string> overrides; // key=value on the system config
    std::vector<int> T_grid;
};

void add_common(CLI::App *app, Common &o)
{
    app->add_option("--config", o.config, "experiment JSON file")->check(CLI::ExistingFile);
    app->add_option("--seed", o.seed, "master seed");
    app->add_option("--trials", o.trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
    app->add_option("--out", o.out, "output file, - for stdout");
    app->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    app->add_option("--set", o.overrides, "override a system field, e.g. --set L=3 --set variation=slow");
    app->add_option("--T", o.T_grid, "T grid, e.g. --T 10 20 50");
}

tdba::json parse_value(const std::string &text)
{
    try
    {
        return tdba::json::parse(text);
    }
    catch (const tdba::json::parse_error &)
    {
        return text; // bare word, e.g. variation=slow
    }
}

// File values first, then flags.
tdba::ExperimentSpec load_spec(const Common &o)
{
    tdba::json j = o.config.empty() ? tdba::json::object() : tdba::read_json_file(o.config);
    if (!o.overrides.empty())
    {
        tdba::json &sys = j["system"];
        if (sys.is_null())
            sys = tdba::json::object();
        for (const auto &kv : o.overrides)
        {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0)
                throw tdba::config_error("--set expects key=value, got " + kv);
            sys[kv.substr(0, eq)] = parse_value(kv.substr(eq + 1));
        }
    }
    if (o.seed)
        j["seed"] = *o.seed;
    if (o.trials)
        j["trials"] = *o.trials;
    if (!o.T_grid.empty())
        j["T_grid"] = o.T_grid;
    j["threads"] = o.threads;
    return tdba::experiment_from_json(j);
}

void write_output(const std::string &path, const std::string &text)
{
    if (path == "-")
    {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << text))
        throw std::runtime_error("cannot write " + path);
}

std::string render(const std::vector<tdba::PdCurve> &curves, const std::string &format)
{
    return format == "json" ? tdba::to_json(curves) : tdba::to_csv(curves);
}

std::string render_pdp(const tdba::PdpResult &r, const std::string &format)
{
    if (format == "json")
        return tdba::to_json(r).dump(2) + "\n";
    std::string s = "tap,before,after\n";
    for (std::size_t k = 0; k < r.before.size(); ++k)
        s += std::to_string(k) + "," + tdba::format_double(r.before[k], "%.9e") + "," +
             tdba::format_double(r.after[k], "%.9e") + "\n";
    return s;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"time-domain beam alignment simulator"};
    app.require_subcommand(1);

    Common pd, cmp, chip, pdp, val;
    std::string sweep_kind = "none";
    std::vector<int> sweep_values;
    auto *pd_cmd = app.add_subcommand("pd-curve", "detection probability versus T");
    add_common(pd_cmd, pd);
    pd_cmd->add_option("--sweep", sweep_kind, "sweep variable")
        ->check(CLI::IsMember({"none", "L", "kappa", "N_c", "variation"}));
    pd_cmd->add_option("--values", sweep_values, "sweep values");

    auto *cmp_cmd = app.add_subcommand("compare", "NNLS against the OMP baseline on slow and fast channels");
    add_common(cmp_cmd, cmp);

    std::vector<int> divisors{1, 2, 4};
    auto *chip_cmd = app.add_subcommand("chip-sweep", "chip duration trade at fixed sequence duration");
    add_common(chip_cmd, chip);
    chip_cmd->add_option("--divisors", divisors, "bandwidth divisors p");

    bool truth_beam = false;
    int pdp_paths = 4;
    auto *pdp_cmd = app.add_subcommand("pdp", "power delay profile before and after alignment");
    add_common(pdp_cmd, pdp);
    pdp_cmd->add_option("--paths", pdp_paths, "number of paths")->check(CLI::PositiveNumber);
    pdp_cmd->add_flag("--truth-beam", truth_beam, "align on the true strongest cell instead of running training");

    bool full = false;
    auto *val_cmd = app.add_subcommand("validate", "run the property suites");
    add_common(val_cmd, val);
    val_cmd->add_flag("--full", full, "also run the Monte Carlo acceptance checks");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (pd_cmd->parsed())
        {
            auto spec = load_spec(pd);
            if (sweep_kind != "none")
            {
                if (sweep_kind == "variation")
                    spec.sweep = tdba::sweep_variation(spec.base);
                else if (sweep_values.empty())
                    throw tdba::config_error("--sweep " + sweep_kind + " needs --values");
                else if (sweep_kind == "L")
                    spec.sweep = tdba::sweep_paths(spec.base, sweep_values);
                else if (sweep_kind == "kappa")
                    spec.sweep = tdba::sweep_kappa(spec.base, sweep_values);
                else
                    spec.sweep = tdba::sweep_chips(spec.base, sweep_values);
            }
            write_output(pd.out, render(tdba::run_pd_curve(spec), pd.format));
        }
        else if (cmp_cmd->parsed())
        {
            const auto res = tdba::run_robustness_compare(load_spec(cmp));
            write_output(cmp.out, render(res.curves, cmp.format));
        }
        else if (chip_cmd->parsed())
        {
            auto spec = load_spec(chip);
            spec.sweep.clear();
            write_output(chip.out, render(tdba::run_chip_duration_sweep(spec, divisors), chip.format));
        }
        else if (pdp_cmd->parsed())
        {
            auto spec = load_spec(pdp);
            tdba::SystemConfig c = spec.base;
            c.L = pdp_paths;
            c.gammas.clear();
            const int trials = pdp.trials.value_or(10000);
            write_output(pdp.out, render_pdp(tdba::run_pdp(c, trials, spec.seed, truth_beam), pdp.format));
        }
        else if (val_cmd->parsed())
        {
            std::vector<tdba::Check> checks = tdba::run_property_suite();
            if (full)
            {
                tdba::McBudget b;
                b.trials = val.trials.value_or(500);
                b.seed = val.seed.value_or(1);
                const auto paths = tdba::paths_curves(b);
                checks.push_back(tdba::check_detection(paths));
                checks.push_back(tdba::check_parity(paths));
                checks.push_back(tdba::check_spreading(b));
                checks.push_back(tdba::check_robustness(b));
                checks.push_back(tdba::check_chip_duration(b));
                checks.push_back(tdba::check_pdp(b));
            }
            bool ok = true;
            std::string report;
            for (const auto &c : checks)
            {
                report += tdba::check_line(c) + "\n";
                ok = ok && c.passed;
            }
            write_output(val.out, report);
            if (!ok)
            {
                std::cerr << "validate: at least one check failed\n";
                return 1;
            }
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
