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

#ifndef TDBA_IO_HPP
#define TDBA_IO_HPP

// Needs nlohmann/json (vendor/json.hpp) on the include path.

#include "arrays.hpp"
#include "channel.hpp"
#include "experiments.hpp"
#include "measurements.hpp"
#include "system_model.hpp"
#include "waveforms.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tdba
{

using json = nlohmann::json;

NLOHMANN_JSON_SERIALIZE_ENUM(ChannelVariation, {{ChannelVariation::fast, "fast"}, {ChannelVariation::slow, "slow"}})
NLOHMANN_JSON_SERIALIZE_ENUM(AngleGrid, {{AngleGrid::on_grid, "on_grid"}, {AngleGrid::off_grid, "off_grid"}})
NLOHMANN_JSON_SERIALIZE_ENUM(PnFamily, {{PnFamily::gold, "gold"}, {PnFamily::m_sequence, "m_sequence"}})
NLOHMANN_JSON_SERIALIZE_ENUM(PnLengthMode, {{PnLengthMode::nearest, "nearest"}, {PnLengthMode::exact, "exact"}})
NLOHMANN_JSON_SERIALIZE_ENUM(CrossCorrelation,
                             {{CrossCorrelation::approx, "approx"}, {CrossCorrelation::exact, "exact"}})

namespace detail
{

// nlohmann maps unknown strings to the first enumerator; reject them instead.
template <class E> E enum_from(const json &j, const char *key)
{
    const E e = j.get<E>();
    if (json(e) != j)
        throw config_error(std::string("unknown value for ") + key + ": " + j.dump());
    return e;
}

template <class T> void read_if(const json &j, const char *key, T &out)
{
    if (auto it = j.find(key); it != j.end())
    {
        if constexpr (std::is_enum_v<T>)
            out = enum_from<T>(*it, key);
        else
            out = it->get<T>();
    }
}

} // namespace detail

inline json to_json(const SystemConfig &c)
{
    return json{{"M", c.M},
                {"N", c.N},
                {"M_RF", c.M_RF},
                {"N_RF", c.N_RF},
                {"kappa_u", c.kappa_u},
                {"kappa_v", c.kappa_v},
                {"B", c.B},
                {"p", c.p},
                {"N_c", c.N_c},
                {"S", c.S},
                {"T", c.T},
                {"f0", c.f0},
                {"snr_bbf_db", c.snr_bbf_db},
                {"N0", c.N0},
                {"L", c.L},
                {"d_max", c.d_max},
                {"seed", c.seed},
                {"variation", c.variation},
                {"grid", c.grid},
                {"pn_family", c.pn_family},
                {"pn_length", c.pn_length},
                {"cross_correlation", c.cross_correlation},
                {"speed_min", c.speed_min},
                {"speed_max", c.speed_max},
                {"gammas", c.gammas}};
}

// Unknown keys are an error, so a typo does not silently fall back to a default.
inline SystemConfig config_from_json(const json &j, SystemConfig c = {})
{
    if (!j.is_object())
        throw config_error("system config must be a JSON object");
    const json known = to_json(c);
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.contains(it.key()))
            throw config_error("unknown config key: " + it.key());
    using detail::read_if;
    read_if(j, "M", c.M);
    read_if(j, "N", c.N);
    read_if(j, "M_RF", c.M_RF);
    read_if(j, "N_RF", c.N_RF);
    read_if(j, "kappa_u", c.kappa_u);
    read_if(j, "kappa_v", c.kappa_v);
    read_if(j, "B", c.B);
    read_if(j, "p", c.p);
    read_if(j, "N_c", c.N_c);
    read_if(j, "S", c.S);
    read_if(j, "T", c.T);
    read_if(j, "f0", c.f0);
    read_if(j, "snr_bbf_db", c.snr_bbf_db);
    read_if(j, "N0", c.N0);
    read_if(j, "L", c.L);
    read_if(j, "d_max", c.d_max);
    read_if(j, "seed", c.seed);
    read_if(j, "variation", c.variation);
    read_if(j, "grid", c.grid);
    read_if(j, "pn_family", c.pn_family);
    read_if(j, "pn_length", c.pn_length);
    read_if(j, "cross_correlation", c.cross_correlation);
    read_if(j, "speed_min", c.speed_min);
    read_if(j, "speed_max", c.speed_max);
    read_if(j, "gammas", c.gammas);
    validate(c);
    return c;
}

inline json read_json_file(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot open " + path);
    try
    {
        return json::parse(f);
    }
    catch (const json::parse_error &e)
    {
        throw config_error(path + ": " + e.what());
    }
}

// Experiment file layout:
//   { "system": {...}, "T_grid": [...], "trials": 500, "seed": 1,
//     "sweep": { "kind": "L" | "kappa" | "N_c" | "variation" | "chip_duration", "values": [...] } }
inline ExperimentSpec experiment_from_json(const json &j)
{
    ExperimentSpec spec;
    if (!j.is_object())
        throw config_error("experiment file must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "system" && it.key() != "T_grid" && it.key() != "trials" && it.key() != "seed" &&
            it.key() != "sweep" && it.key() != "threads")
            throw config_error("unknown experiment key: " + it.key());
    if (j.contains("system"))
        spec.base = config_from_json(j.at("system"));
    detail::read_if(j, "T_grid", spec.T_grid);
    detail::read_if(j, "trials", spec.trials);
    detail::read_if(j, "seed", spec.seed);
    detail::read_if(j, "threads", spec.threads);
    if (j.contains("sweep"))
    {
        const json &sw = j.at("sweep");
        const auto kind = sw.at("kind").get<std::string>();
        if (kind == "variation")
            spec.sweep = sweep_variation(spec.base);
        else
        {
            const auto values = sw.at("values").get<std::vector<int>>();
            if (kind == "L")
                spec.sweep = sweep_paths(spec.base, values);
            else if (kind == "kappa")
                spec.sweep = sweep_kappa(spec.base, values);
            else if (kind == "N_c")
                spec.sweep = sweep_chips(spec.base, values);
            else if (kind == "chip_duration")
                spec.sweep = sweep_chip_duration(spec.base, values);
            else
                throw config_error("unknown sweep kind: " + kind);
        }
    }
    validate(spec);
    return spec;
}

inline json to_json(const PathSet &ps)
{
    json arr = json::array();
    for (const auto &p : ps.paths)
        arr.push_back({{"gamma", p.gamma},
                       {"aod_idx", p.aod_idx},
                       {"aoa_idx", p.aoa_idx},
                       {"delay_chips", p.delay_chips},
                       {"doppler_hz", p.doppler_hz},
                       {"aod_rad", p.aod_rad},
                       {"aoa_rad", p.aoa_rad}});
    return json{{"grid", ps.grid}, {"paths", arr}};
}

inline PathSet pathset_from_json(const json &j)
{
    PathSet ps;
    detail::read_if(j, "grid", ps.grid);
    for (const auto &e : j.at("paths"))
    {
        Path p;
        p.gamma = e.at("gamma").get<double>();
        p.aod_idx = e.at("aod_idx").get<int>();
        p.aoa_idx = e.at("aoa_idx").get<int>();
        p.delay_chips = e.at("delay_chips").get<int>();
        detail::read_if(e, "doppler_hz", p.doppler_hz);
        detail::read_if(e, "aod_rad", p.aod_rad);
        detail::read_if(e, "aoa_rad", p.aoa_rad);
        ps.paths.push_back(p);
    }
    return ps;
}

inline json to_json(const ProbingCodebook &cb)
{
    auto side = [](const std::vector<std::vector<SparseBeam>> &beams)
    {
        json out = json::array();
        for (const auto &slot : beams)
        {
            json row = json::array();
            for (const auto &b : slot)
                row.push_back(b.support);
            out.push_back(row);
        }
        return out;
    };
    return json{{"seed", cb.seed}, {"M", cb.M}, {"N", cb.N}, {"bs", side(cb.bs)}, {"user", side(cb.user)}};
}

inline ProbingCodebook codebook_from_json(const json &j)
{
    ProbingCodebook cb;
    cb.seed = j.at("seed").get<std::uint64_t>();
    cb.M = j.at("M").get<int>();
    cb.N = j.at("N").get<int>();
    auto side = [](const json &arr, int dim)
    {
        std::vector<std::vector<SparseBeam>> out;
        for (const auto &slot : arr)
        {
            std::vector<SparseBeam> row;
            for (const auto &sup : slot)
                row.push_back(make_beam(dim, sup.get<std::vector<int>>()));
            out.push_back(std::move(row));
        }
        return out;
    };
    cb.bs = side(j.at("bs"), cb.M);
    cb.user = side(j.at("user"), cb.N);
    return cb;
}

// Measurement dump, plain text:
//   tdba-measurements 1
//   rows <R> cols <C> offset <noise offset>
//   <q> <k> <c_1> ... <c_k>      one line per row, c_* = ones of the row
inline void write_measurements(std::ostream &os, const MeasurementSystem &sys)
{
    char buf[64];
    os << "tdba-measurements 1\n";
    std::snprintf(buf, sizeof buf, "%.17g", sys.noise_offset);
    os << "rows " << sys.rows() << " cols " << sys.cols() << " offset " << buf << '\n';
    for (int r = 0; r < sys.rows(); ++r)
    {
        std::snprintf(buf, sizeof buf, "%.17g", sys.q(r));
        os << buf << ' ' << sys.windows[static_cast<std::size_t>(r)].size();
        for (int c : sys.windows[static_cast<std::size_t>(r)])
            os << ' ' << c;
        os << '\n';
    }
}

inline MeasurementSystem read_measurements(std::istream &is)
{
    std::string magic, key;
    int version = 0, rows = 0, cols = 0;
    MeasurementSystem sys;
    if (!(is >> magic >> version) || magic != "tdba-measurements" || version != 1)
        throw std::runtime_error("not a measurement dump");
    is >> key >> rows;
    if (key != "rows")
        throw std::runtime_error("measurement dump: expected rows");
    is >> key >> cols;
    if (key != "cols")
        throw std::runtime_error("measurement dump: expected cols");
    is >> key >> sys.noise_offset;
    if (key != "offset" || !is || rows < 0 || cols <= 0)
        throw std::runtime_error("measurement dump: bad header");
    sys.B = RMat::Zero(rows, cols);
    sys.q.resize(rows);
    sys.windows.resize(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r)
    {
        std::size_t k = 0;
        if (!(is >> sys.q(r) >> k))
            throw std::runtime_error("measurement dump: truncated at row " + std::to_string(r));
        auto &w = sys.windows[static_cast<std::size_t>(r)];
        w.resize(k);
        for (auto &c : w)
        {
            if (!(is >> c) || c < 0 || c >= cols)
                throw std::runtime_error("measurement dump: bad column at row " + std::to_string(r));
            sys.B(r, c) = 1.0;
        }
    }
    return sys;
}

// One chip per line as +1 / -1.
inline void write_pn(std::ostream &os, const PnSequence &seq)
{
    for (double v : seq.chips)
        os << (v > 0 ? "+1" : "-1") << '\n';
}

inline PnSequence read_pn(std::istream &is)
{
    PnSequence seq;
    std::string tok;
    while (is >> tok)
    {
        if (tok == "+1" || tok == "1")
            seq.chips.push_back(1.0);
        else if (tok == "-1")
            seq.chips.push_back(-1.0);
        else
            throw std::runtime_error("PN file: unexpected token " + tok);
    }
    return seq;
}

inline json to_json(const PdpResult &r)
{
    json j{{"paths", to_json(r.paths)},
           {"truth", {{"aoa", r.truth.aoa}, {"aod", r.truth.aod}}},
           {"before", r.before},
           {"after", r.after}};
    if (r.detected)
        j["detected"] = {{"aoa", r.detected->aoa}, {"aod", r.detected->aod}};
    else
        j["detected"] = nullptr;
    return j;
}

} // namespace tdba

#endif
