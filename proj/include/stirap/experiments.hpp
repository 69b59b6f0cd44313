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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include "stirap/core.hpp"
#include "stirap/dissipator.hpp"
#include "stirap/drive.hpp"
#include "stirap/integrator.hpp"

namespace stirap {

enum class ModelKind { Microscopic, Phenomenological };
enum class ModelSelection { Microscopic, Phenomenological, Both };

inline std::string_view to_string(ModelKind m)
{
    return m == ModelKind::Microscopic ? "microscopic" : "phenomenological";
}

inline std::vector<ModelKind> expand(ModelSelection s)
{
    switch (s) {
    case ModelSelection::Microscopic: return {ModelKind::Microscopic};
    case ModelSelection::Phenomenological: return {ModelKind::Phenomenological};
    case ModelSelection::Both: return {ModelKind::Microscopic, ModelKind::Phenomenological};
    }
    return {};
}

/// n points from lo to hi, uniform in log10. Endpoints are exact.
inline std::vector<double> log_space(double lo, double hi, int n)
{
    if (!(lo > 0.0) || !(hi >= lo) || n < 1) {
        throw std::invalid_argument("log_space: need 0 < lo <= hi and n >= 1");
    }
    std::vector<double> v(static_cast<std::size_t>(n));
    const double a = std::log10(lo), b = std::log10(hi);
    for (int i = 0; i < n; ++i) {
        v[i] = n == 1 ? lo : std::pow(10.0, a + (b - a) * i / (n - 1));
    }
    v.front() = lo;
    v.back() = n == 1 ? lo : hi;
    return v;
}

inline std::vector<double> linear_space(double lo, double hi, int n)
{
    if (!(hi >= lo) || n < 1) {
        throw std::invalid_argument("linear_space: need lo <= hi and n >= 1");
    }
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    }
    if (n > 1) {
        v.back() = hi;
    }
    return v;
}

struct SweepSpec {
    Sequence sequence = Sequence::Counterintuitive;
    ModelSelection models = ModelSelection::Microscopic;
    std::vector<double> gammas = log_space(1e-2, 1e2, 40);
    std::vector<double> alphas = {1.0};
    std::vector<double> n_photons = {0.0};
    double omega0 = 25.0;
    double tau = 1.5;
    double delta = 1.0;
    IntegratorConfig integrator{};
    /// Worker threads; 0 picks the hardware concurrency.
    unsigned jobs = 0;

    PulseSchedule schedule() const { return {omega0, tau, 1.0, delta, sequence}; }

    void validate() const
    {
        auto check_grid = [](const std::vector<double>& g, std::string_view name) {
            if (g.empty()) {
                throw std::invalid_argument(std::string(name) + " grid is empty");
            }
            for (double v : g) {
                if (!std::isfinite(v) || v < 0.0) {
                    throw std::invalid_argument(std::string(name) +
                                                " grid values must be finite and >= 0");
                }
            }
        };
        check_grid(gammas, "gamma");
        check_grid(alphas, "alpha");
        check_grid(n_photons, "n_photons");
        schedule().validate();
        integrator.validate();
    }
};

struct EfficiencyRecord {
    Sequence sequence = Sequence::Counterintuitive;
    ModelKind model = ModelKind::Microscopic;
    double gamma = 0.0;
    double alpha = 1.0;
    double n_photons = 0.0;
    double p3_final = 0.0;
    double trace_err = 0.0;
    double min_eig = 0.0;
    std::size_t steps = 0;

    auto key() const { return std::tuple{model, gamma, alpha, n_photons}; }
};

/// Post-pulse population of the target state |3>.
inline double efficiency(const DensityMatrix& rho)
{
    return population(rho, 3);
}

class SweepError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

inline Model make_model(ModelKind kind, double gamma, double alpha, double n_photons)
{
    if (kind == ModelKind::Microscopic) {
        return MicroscopicModel{{gamma, alpha, n_photons}};
    }
    return PhenomenologicalModel{{gamma, alpha * gamma}};
}

/// Runs `fn(i)` for i in [0, n) on up to `jobs` threads. The exception from
/// the lowest failing index is rethrown after all workers stop.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn)
{
    if (jobs == 0) {
        jobs = std::max(1u, std::thread::hardware_concurrency());
    }
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(n, 1)));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex mutex;
    std::size_t failed_index = std::numeric_limits<std::size_t>::max();
    std::exception_ptr error;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(mutex);
                if (i < failed_index) {
                    failed_index = i;
                    error = std::current_exception();
                }
                failed.store(true);
            }
        }
    };

    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(jobs);
        for (unsigned j = 0; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

inline EfficiencyRecord run_point(const SweepSpec& spec, ModelKind kind, double gamma,
                                  double alpha, double n_photons)
{
    EfficiencyRecord rec;
    rec.sequence = spec.sequence;
    rec.model = kind;
    rec.gamma = gamma;
    rec.alpha = alpha;
    rec.n_photons = n_photons;
    try {
        const EvolveResult r = evolve(make_model(kind, gamma, alpha, n_photons), spec.schedule(),
                                      pure_state(1), spec.integrator);
        rec.p3_final = efficiency(r.final_state);
        rec.trace_err = r.diagnostics.max_trace_error;
        rec.min_eig = r.diagnostics.min_eigenvalue;
        rec.steps = r.diagnostics.steps;
    } catch (const std::exception& e) {
        std::ostringstream os;
        os << "sweep point failed (sequence=" << to_string(spec.sequence)
           << ", model=" << to_string(kind) << ", gamma=" << gamma << ", alpha=" << alpha
           << ", n_photons=" << n_photons << "): " << e.what();
        throw SweepError(os.str());
    }
    return rec;
}

/// Every (model, gamma, alpha, N) combination, sorted lexicographically in
/// those coordinates.
inline std::vector<EfficiencyRecord> run_sweep(const SweepSpec& spec)
{
    spec.validate();
    struct Job {
        ModelKind model;
        double gamma, alpha, n;
    };
    std::vector<Job> jobs;
    for (ModelKind m : expand(spec.models)) {
        for (double g : spec.gammas) {
            for (double a : spec.alphas) {
                for (double n : spec.n_photons) {
                    jobs.push_back({m, g, a, n});
                }
            }
        }
    }
    std::vector<EfficiencyRecord> out(jobs.size());
    parallel_for(jobs.size(), spec.jobs, [&](std::size_t i) {
        const Job& j = jobs[i];
        out[i] = run_point(spec, j.model, j.gamma, j.alpha, j.n);
    });
    std::stable_sort(out.begin(), out.end(),
                     [](const EfficiencyRecord& x, const EfficiencyRecord& y) {
                         return x.key() < y.key();
                     });
    return out;
}

inline std::vector<EfficiencyRecord> sweep_gamma(const SweepSpec& spec)
{
    if (spec.alphas.size() != 1 || spec.n_photons.size() != 1) {
        throw std::invalid_argument("sweep_gamma: alpha and N grids must hold one value each");
    }
    return run_sweep(spec);
}

inline std::vector<EfficiencyRecord> sweep_gamma_alpha(const SweepSpec& spec)
{
    if (spec.n_photons.size() != 1) {
        throw std::invalid_argument("sweep_gamma_alpha: N grid must hold one value");
    }
    return run_sweep(spec);
}

inline std::vector<EfficiencyRecord> sweep_gamma_n(const SweepSpec& spec)
{
    if (spec.alphas.size() != 1) {
        throw std::invalid_argument("sweep_gamma_n: alpha grid must hold one value");
    }
    return run_sweep(spec);
}

struct ComparisonRow {
    double gamma = 0.0;
    double alpha = 1.0;
    double n_photons = 0.0;
    double p3_microscopic = 0.0;
    double p3_phenomenological = 0.0;
    double gap() const { return p3_microscopic - p3_phenomenological; }
};

struct ModelComparison {
    Sequence sequence = Sequence::Counterintuitive;
    std::vector<ComparisonRow> rows;
    double max_gap = 0.0;       // max of micro - phen
    double min_gap = 0.0;       // min of micro - phen
    double max_abs_gap = 0.0;
    double gamma_at_max_abs_gap = 0.0;
    /// Gammas where micro - phen changes sign, interpolated linearly in
    /// log(gamma) between neighbouring grid points.
    std::vector<double> crossovers;
};

inline ModelComparison compare_models(SweepSpec spec)
{
    if (spec.gammas.empty() || spec.alphas.empty() || spec.n_photons.empty()) {
        throw std::invalid_argument("compare_models: empty grid");
    }
    spec.models = ModelSelection::Both;
    const std::vector<EfficiencyRecord> records = run_sweep(spec);
    const std::size_t half = records.size() / 2;

    ModelComparison cmp;
    cmp.sequence = spec.sequence;
    cmp.max_gap = -std::numeric_limits<double>::infinity();
    cmp.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < half; ++i) {
        const EfficiencyRecord& micro = records[i];
        const EfficiencyRecord& phen = records[half + i];
        ComparisonRow row{micro.gamma, micro.alpha, micro.n_photons, micro.p3_final,
                          phen.p3_final};
        cmp.max_gap = std::max(cmp.max_gap, row.gap());
        cmp.min_gap = std::min(cmp.min_gap, row.gap());
        if (std::abs(row.gap()) > cmp.max_abs_gap || cmp.rows.empty()) {
            cmp.max_abs_gap = std::abs(row.gap());
            cmp.gamma_at_max_abs_gap = row.gamma;
        }
        cmp.rows.push_back(row);
    }

    // Rows are ordered by gamma, then alpha, then N; walk each (alpha, N)
    // curve along gamma.
    for (std::size_t i = 0; i < cmp.rows.size(); ++i) {
        for (std::size_t j = i + 1; j < cmp.rows.size(); ++j) {
            const ComparisonRow& a = cmp.rows[i];
            const ComparisonRow& b = cmp.rows[j];
            if (a.alpha != b.alpha || a.n_photons != b.n_photons) {
                continue;
            }
            if ((a.gap() < 0.0 && b.gap() > 0.0) || (a.gap() > 0.0 && b.gap() < 0.0)) {
                const double w = a.gap() / (a.gap() - b.gap());
                if (a.gamma > 0.0 && b.gamma > 0.0) {
                    cmp.crossovers.push_back(std::exp(std::log(a.gamma) +
                                                      w * (std::log(b.gamma) - std::log(a.gamma))));
                } else {
                    cmp.crossovers.push_back(a.gamma + w * (b.gamma - a.gamma));
                }
            }
            break;
        }
    }
    std::sort(cmp.crossovers.begin(), cmp.crossovers.end());
    return cmp;
}

} // namespace stirap
