// Copyright 2026 The stirap-lambda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stirap/experiments.hpp"
#include "stirap/integrator.hpp"

namespace stirap {

enum class OutputFormat { Csv, Json };

inline constexpr std::string_view kRecordCsvHeader =
    "sequence,model,gamma,alpha,n_photons,p3_final,trace_err,min_eig";

/// 12 significant digits, shortest form.
inline std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// v rounded to 12 significant digits, as the CSV writer would print it.
inline double round_significant(double v)
{
    return std::strtod(format_number(v).c_str(), nullptr);
}

inline std::string records_to_csv(const std::vector<EfficiencyRecord>& records)
{
    std::ostringstream os;
    os << kRecordCsvHeader << '\n';
    for (const EfficiencyRecord& r : records) {
        os << to_string(r.sequence) << ',' << to_string(r.model) << ',' << format_number(r.gamma)
           << ',' << format_number(r.alpha) << ',' << format_number(r.n_photons) << ','
           << format_number(r.p3_final) << ',' << format_number(r.trace_err) << ','
           << format_number(r.min_eig) << '\n';
    }
    return os.str();
}

inline std::string records_to_json(const std::vector<EfficiencyRecord>& records)
{
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const EfficiencyRecord& r : records) {
        arr.push_back({
            {"sequence", to_string(r.sequence)},
            {"model", to_string(r.model)},
            {"gamma", round_significant(r.gamma)},
            {"alpha", round_significant(r.alpha)},
            {"n_photons", round_significant(r.n_photons)},
            {"p3_final", round_significant(r.p3_final)},
            {"trace_err", round_significant(r.trace_err)},
            {"min_eig", round_significant(r.min_eig)},
        });
    }
    return arr.dump(2) + "\n";
}

inline Sequence parse_sequence(std::string_view s)
{
    if (s == "counterintuitive" || s == "ci" || s == "stirap") {
        return Sequence::Counterintuitive;
    }
    if (s == "intuitive" || s == "i" || s == "b-stirap") {
        return Sequence::Intuitive;
    }
    throw std::invalid_argument("unknown sequence '" + std::string(s) + "'");
}

inline ModelKind parse_model_kind(std::string_view s)
{
    if (s == "microscopic" || s == "micro") {
        return ModelKind::Microscopic;
    }
    if (s == "phenomenological" || s == "phen") {
        return ModelKind::Phenomenological;
    }
    throw std::invalid_argument("unknown model '" + std::string(s) + "'");
}

/// Reads back what records_to_csv() writes; step counts are not stored.
inline std::vector<EfficiencyRecord> records_from_csv(const std::string& text)
{
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != kRecordCsvHeader) {
        throw std::runtime_error("records_from_csv: missing or unexpected header");
    }
    std::vector<EfficiencyRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.size() != 8) {
            throw std::runtime_error("records_from_csv: expected 8 columns in '" + line + "'");
        }
        EfficiencyRecord r;
        r.sequence = parse_sequence(cells[0]);
        r.model = parse_model_kind(cells[1]);
        r.gamma = std::stod(cells[2]);
        r.alpha = std::stod(cells[3]);
        r.n_photons = std::stod(cells[4]);
        r.p3_final = std::stod(cells[5]);
        r.trace_err = std::stod(cells[6]);
        r.min_eig = std::stod(cells[7]);
        out.push_back(r);
    }
    return out;
}

inline std::string format_records(const std::vector<EfficiencyRecord>& records, OutputFormat f)
{
    return f == OutputFormat::Csv ? records_to_csv(records) : records_to_json(records);
}

inline void write_text(const std::string& text, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw std::runtime_error("write to '" + path + "' failed");
    }
}

inline void write_records(const std::vector<EfficiencyRecord>& records, OutputFormat f,
                          const std::string& path)
{
    write_text(format_records(records, f), path);
}

inline constexpr std::string_view kTrajectoryCsvHeader =
    "t,rho11,rho22,rho33,p_plus,p_zero,p_minus,trace_err,min_eig";

inline std::string trajectory_to_csv(const TrajectoryRecord& traj)
{
    std::ostringstream os;
    os << kTrajectoryCsvHeader << '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        os << format_number(traj.times[i]);
        for (double v : traj.bare[i]) {
            os << ',' << format_number(v);
        }
        for (double v : traj.dressed[i]) {
            os << ',' << format_number(v);
        }
        os << ',' << format_number(traj.trace_error[i]) << ','
           << format_number(traj.min_eigenvalue[i]) << '\n';
    }
    return os.str();
}

inline std::string trajectory_to_json(const TrajectoryRecord& traj)
{
    nlohmann::ordered_json j;
    auto column = [&](auto get) {
        nlohmann::json c = nlohmann::json::array();
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            c.push_back(round_significant(get(i)));
        }
        return c;
    };
    j["t"] = column([&](std::size_t i) { return traj.times[i]; });
    j["rho11"] = column([&](std::size_t i) { return traj.bare[i][0]; });
    j["rho22"] = column([&](std::size_t i) { return traj.bare[i][1]; });
    j["rho33"] = column([&](std::size_t i) { return traj.bare[i][2]; });
    j["p_plus"] = column([&](std::size_t i) { return traj.dressed[i][0]; });
    j["p_zero"] = column([&](std::size_t i) { return traj.dressed[i][1]; });
    j["p_minus"] = column([&](std::size_t i) { return traj.dressed[i][2]; });
    j["trace_err"] = column([&](std::size_t i) { return traj.trace_error[i]; });
    j["min_eig"] = column([&](std::size_t i) { return traj.min_eigenvalue[i]; });
    return j.dump(2) + "\n";
}

/// Plain gnuplot script plotting p3_final against gamma (log axis) from a
/// records CSV, one curve per model (and per alpha / N value).
inline std::string records_gnuplot_script(const std::string& csv_path, const std::string& title)
{
    std::ostringstream os;
    os << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set logscale x\n"
       << "set xlabel 'gamma T'\n"
       << "set ylabel 'P3 (final)'\n"
       << "set yrange [0:1.05]\n"
       << "set title '" << title << "'\n"
       << "plot '" << csv_path << "' using 3:(strcol(2) eq 'microscopic' ? $6 : 1/0) "
       << "with linespoints title 'microscopic', \\\n"
       << "     '" << csv_path << "' using 3:(strcol(2) eq 'phenomenological' ? $6 : 1/0) "
       << "with linespoints title 'phenomenological'\n";
    return os.str();
}

inline std::string trajectory_gnuplot_script(const std::string& csv_path)
{
    std::ostringstream os;
    os << "set datafile separator ','\n"
       << "set xlabel 't / T'\n"
       << "set ylabel 'population'\n"
       << "set yrange [-0.05:1.05]\n"
       << "plot for [c=2:7] '" << csv_path << "' using 1:c with lines title columnhead(c)\n";
    return os.str();
}

/// Everything a CLI invocation needs; validated in full before any run.
struct RunConfig {
    PulseSchedule schedule{};
    BathModel bath{};
    ModelKind model = ModelKind::Microscopic;
    /// Phenomenological rates for `simulate`; default to gamma and alpha*gamma.
    std::optional<double> gamma1;
    std::optional<double> gamma3;
    IntegratorConfig integrator{};
    SweepSpec sweep{};
    std::string output_path;
    OutputFormat format = OutputFormat::Csv;

    PhenomenologicalRates phenomenological_rates() const
    {
        return {gamma1.value_or(bath.gamma), gamma3.value_or(bath.alpha * bath.gamma)};
    }

    Model simulation_model() const
    {
        if (model == ModelKind::Microscopic) {
            return MicroscopicModel{bath};
        }
        return PhenomenologicalModel{phenomenological_rates()};
    }

    void validate() const
    {
        schedule.validate();
        bath.validate();
        phenomenological_rates().validate();
        integrator.validate();
        sweep.validate();
    }
};

} // namespace stirap
