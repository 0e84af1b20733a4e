#include "tsvar/pareto.hpp"

#include "tsvar/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <optional>
#include <thread>

namespace tsvar {

namespace {

bool weakly_dominates(const std::vector<double>& u, const std::vector<double>& w, double tol)
{
    bool strict = false;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (u[k] > w[k] + tol)
            return false;
        if (u[k] < w[k] - tol)
            strict = true;
    }
    return strict;
}

bool nearly_equal(const std::vector<double>& u, const std::vector<double>& w, double tol)
{
    for (std::size_t k = 0; k < u.size(); ++k)
        if (std::abs(u[k] - w[k]) > tol)
            return false;
    return true;
}

void compositions(std::size_t d, int remaining, std::vector<int>& prefix, std::vector<std::vector<int>>& out)
{
    if (prefix.size() + 1 == d) {
        prefix.push_back(remaining);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    const int slots_after = static_cast<int>(d - prefix.size() - 1);
    for (int c = 1; c <= remaining - slots_after; ++c) {
        prefix.push_back(c);
        compositions(d, remaining - c, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

std::vector<std::size_t> dominance_filter(const std::vector<std::vector<double>>& points, double tol)
{
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool removed = false;
        for (std::size_t j = 0; j < points.size() && !removed; ++j) {
            if (j == i)
                continue;
            if (points[j].size() != points[i].size())
                throw DimensionError("objective vectors differ in length");
            removed = weakly_dominates(points[j], points[i], tol) || (j < i && nearly_equal(points[j], points[i], tol));
        }
        if (!removed)
            keep.push_back(i);
    }
    return keep;
}

std::vector<std::vector<double>> simplex_weights(std::size_t d, int k)
{
    if (d < 1)
        throw DomainError("need at least one objective");
    if (static_cast<std::size_t>(k) < d)
        throw DomainError("grid k=" + std::to_string(k) + " has no strictly positive weights for d="
                          + std::to_string(d));
    std::vector<std::vector<int>> counts;
    std::vector<int> prefix;
    compositions(d, k, prefix, counts);
    std::vector<std::vector<double>> out;
    out.reserve(counts.size());
    for (const auto& c : counts) {
        std::vector<double> w;
        for (int ci : c)
            w.push_back(static_cast<double>(ci) / k);
        out.push_back(std::move(w));
    }
    return out;
}

ParetoFront weighted_sweep(const VariationalProblem& p, int k, const SweepOptions& options)
{
    if (p.objective_count() < 2)
        throw DomainError("a Pareto sweep needs at least 2 objectives");
    if (k < 2)
        throw DomainError("the weight grid needs k >= 2");

    const auto weights = simplex_weights(p.objective_count(), k);
    std::vector<std::optional<SolveResult>> results(weights.size());
    std::vector<std::string> errors(weights.size());

    const auto solve_one = [&](std::size_t w, const std::optional<GridFunction>& init) {
        try {
            results[w] = solve_scalar(p, ScalarObjective::weighted(weights[w]), init, options.solver);
        } catch (const Error& e) {
            errors[w] = e.what();
        }
    };

    if (options.warm_start) {
        std::optional<GridFunction> init;
        for (std::size_t w = 0; w < weights.size(); ++w) {
            solve_one(w, init);
            if (results[w] && results[w]->converged())
                init = results[w]->y;
        }
    } else {
        std::atomic<std::size_t> next{0};
        const auto worker = [&] {
            for (std::size_t w = next++; w < weights.size(); w = next++)
                solve_one(w, std::nullopt);
        };
        const unsigned count = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(weights.size())));
        std::vector<std::thread> pool;
        for (unsigned t = 1; t < count; ++t)
            pool.emplace_back(worker);
        worker();
        for (auto& t : pool)
            t.join();
    }

    ParetoFront front;
    front.attempted = weights.size();
    std::vector<ParetoEntry> converged;
    for (std::size_t w = 0; w < weights.size(); ++w) {
        if (!results[w]) {
            front.failures.push_back({weights[w], errors[w]});
        } else if (!results[w]->converged()) {
            front.failures.push_back({weights[w], "solver status " + to_string(results[w]->status)});
        } else {
            std::vector<double> objectives = results[w]->values.objectives;
            converged.push_back({weights[w], std::move(objectives), std::move(*results[w])});
        }
    }

    std::vector<std::vector<double>> points;
    points.reserve(converged.size());
    for (const auto& e : converged)
        points.push_back(e.objectives);
    const auto keep = dominance_filter(points, options.dom_tol);
    front.dominated_removed = converged.size() - keep.size();
    for (std::size_t i : keep)
        front.entries.push_back(std::move(converged[i]));
    std::stable_sort(front.entries.begin(), front.entries.end(),
                     [](const ParetoEntry& a, const ParetoEntry& b) { return a.objectives < b.objectives; });
    return front;
}

std::string to_string(NcStatus s)
{
    switch (s) {
    case NcStatus::Confirmed:
        return "Confirmed";
    case NcStatus::Refuted:
        return "Refuted";
    case NcStatus::Inconclusive:
        return "Inconclusive";
    }
    return "?";
}

NcReport nc_crosscheck(const VariationalProblem& p, const GridFunction& y, std::size_t objective,
                       const SolverOptions& options, double nc_tol)
{
    if (p.objective_count() < 2)
        throw DomainError("the cross-check needs at least 2 objectives");
    if (objective >= p.objective_count())
        throw DomainError("objective index " + std::to_string(objective + 1) + " out of range");
    p.require_compatible(y);

    const FunctionalValue at = evaluate(p, y);
    std::vector<Constraint> constraints;
    for (std::size_t j = 0; j < p.objective_count(); ++j)
        if (j != objective)
            constraints.push_back({p.objectives()[j], at.objectives[j]});
    for (const auto& c : p.constraints())
        constraints.push_back(c);
    const VariationalProblem sub = p.with_functionals({p.objectives()[objective]}, std::move(constraints));

    NcReport report;
    report.objective = objective;
    report.original = at.objectives[objective];
    try {
        SolveResult r = solve_scalar(sub, ScalarObjective::single(0, 1), y, options);
        report.resolved = r.objective;
        report.improvement = report.original - report.resolved;
        if (!r.converged()) {
            report.status = NcStatus::Inconclusive;
            report.message = "re-solve ended with " + to_string(r.status);
        } else {
            report.status = report.improvement <= nc_tol ? NcStatus::Confirmed : NcStatus::Refuted;
        }
        report.result = std::move(r);
    } catch (const Error& e) {
        report.status = NcStatus::Inconclusive;
        report.message = e.what();
        report.resolved = report.original;
        report.improvement = 0.0;
    }
    return report;
}

NcReport nc_crosscheck(const VariationalProblem& p, const ParetoEntry& entry, std::size_t objective,
                       const SolverOptions& options, double nc_tol)
{
    if (!entry.result.converged())
        throw DomainError("the cross-check needs a converged entry");
    return nc_crosscheck(p, entry.result.y, objective, options, nc_tol);
}

} // namespace tsvar
