#pragma once

#include "tsvar/solver.hpp"

#include <string>
#include <vector>

namespace tsvar {

inline constexpr double kDefaultDominanceTolerance = 1e-9;
inline constexpr double kDefaultNcTolerance = 1e-6;

/// Indices of the points that survive: a point is dropped when another one is <= in every
/// coordinate and < by more than tol in at least one, or when it equals an earlier point
/// within tol. Survivors keep their input order.
std::vector<std::size_t> dominance_filter(const std::vector<std::vector<double>>& points,
                                          double tol = kDefaultDominanceTolerance);

/// Strictly positive weights c/k with integer c_i >= 1 and Sum c_i = k, ordered
/// lexicographically (so by gamma_1 first).
std::vector<std::vector<double>> simplex_weights(std::size_t d, int k);

struct ParetoEntry {
    std::vector<double> weights;
    std::vector<double> objectives;
    SolveResult result;
};

struct SweepFailure {
    std::vector<double> weights;
    std::string reason;
};

struct ParetoFront {
    /// Sorted lexicographically by objective vector.
    std::vector<ParetoEntry> entries;
    std::size_t attempted = 0;
    std::size_t dominated_removed = 0;
    std::vector<SweepFailure> failures;
};

struct SweepOptions {
    SolverOptions solver;
    /// Each solve starts from the previous weight's solution; forces a sequential sweep.
    bool warm_start = true;
    /// Worker threads used when warm_start is off.
    unsigned threads = 1;
    double dom_tol = kDefaultDominanceTolerance;
};

ParetoFront weighted_sweep(const VariationalProblem& p, int k, const SweepOptions& options = {});

enum class NcStatus { Confirmed, Refuted, Inconclusive };
std::string to_string(NcStatus s);

struct NcReport {
    std::size_t objective = 0;
    double original = 0.0;
    double resolved = 0.0;
    /// original - resolved; a genuine Pareto point gives <= nc_tol.
    double improvement = 0.0;
    NcStatus status = NcStatus::Inconclusive;
    std::string message;
    std::optional<SolveResult> result;
};

/// Re-solves min L_i subject to L_j = L_j[y] for j != i (plus the problem's own constraints),
/// starting from y.
NcReport nc_crosscheck(const VariationalProblem& p, const GridFunction& y, std::size_t objective,
                       const SolverOptions& options = {}, double nc_tol = kDefaultNcTolerance);

NcReport nc_crosscheck(const VariationalProblem& p, const ParetoEntry& entry, std::size_t objective,
                       const SolverOptions& options = {}, double nc_tol = kDefaultNcTolerance);

} // namespace tsvar
