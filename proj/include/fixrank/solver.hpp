#pragma once

// Hankel-structured fixed-rank approximation of a signal, i.e. fitting f by
// K exponentials:
//     min_A  I**(A) + ι_Hankel(A),   F = H(f),
// solved by Douglas–Rachford splitting between the envelope prox and the
// Hankel projection. Two baselines share the harness: the same splitting with
// a nuclear-norm penalty, and Cadzow's alternating truncation/projection.

#include "fixrank/hankel.hpp"
#include "fixrank/matrix_ops.hpp"

#include <cstdint>
#include <future>
#include <optional>
#include <string>
#include <vector>

namespace fixrank {

struct SolverConfig {
    int K = 1;
    double rho = 1.0; // prox weight; a step τ maps to ρ = 1/(2τ)
    int max_iters = 5000;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    double rank_tol = 1e-9;
    int rows = 0; // Hankel rows; 0 selects the most-square shape
};

inline double rho_from_tau(double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("rho_from_tau: tau must be positive");
    return 1.0 / (2.0 * tau);
}

struct IterationRecord {
    int iter = 0;
    double objective = 0.0;   // method objective at the Hankel-projected iterate
    double feasibility = 0.0; // ‖A − P_H(A)‖_F of the unprojected iterate
    double delta = 0.0;       // relative Frobenius change of the driving variable
    std::vector<double> spectrum;
};

struct SolverTrace {
    std::vector<IterationRecord> records;
    bool converged = false;

    [[nodiscard]] int iterations() const { return static_cast<int>(records.size()); }
};

struct SolveResult {
    std::string method;
    std::optional<double> mu;
    Matrix A; // Hankel
    Signal signal;
    SolverTrace trace;
    int rank = 0;
};

namespace detail {

struct HankelSetup {
    Matrix F;
    int rows = 0;
};

inline HankelSetup validate_solver_input(const Signal &f, const SolverConfig &cfg) {
    if (f.size() < 3) throw std::invalid_argument("solver: signal needs at least 3 samples");
    detail::require_positive(cfg.rho, "solver");
    if (cfg.max_iters < 1) throw std::invalid_argument("solver: max_iters must be positive");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("solver: tol must be positive");
    const int rows = cfg.rows > 0 ? cfg.rows : default_hankel_rows(f.size());
    Matrix F = hankel_from_signal(f, rows);
    const int min_dim = static_cast<int>(std::min(F.rows(), F.cols()));
    if (cfg.K < 1 || cfg.K >= min_dim)
        throw std::invalid_argument("solver: K=" + std::to_string(cfg.K) + " must satisfy 1 <= K < " +
                                    std::to_string(min_dim));
    return {std::move(F), rows};
}

inline double relative_change(const Matrix &next, const Matrix &prev) {
    return (next - prev).norm() / std::max(1.0, prev.norm());
}

inline SolveResult finish(std::string method, std::optional<double> mu, Matrix A, SolverTrace trace,
                          double rank_tol) {
    SolveResult out;
    out.method = std::move(method);
    out.mu = mu;
    out.rank = numerical_rank(svd(A).spectrum, rank_tol);
    out.signal = signal_from_hankel(A);
    out.A = std::move(A);
    out.trace = std::move(trace);
    return out;
}

/// Douglas–Rachford on prox_f + ι_Hankel, started at Y = F:
///   A = prox_f(Y),  Y ← Y + P_H(2A − Y) − A.
template <class Prox, class Objective>
SolveResult douglas_rachford(std::string method, std::optional<double> mu, const Matrix &F,
                             const SolverConfig &cfg, Prox &&prox, Objective &&objective) {
    SolverTrace trace;
    Matrix Y = F;
    Matrix A = F;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        A = prox(Y);
        const Matrix PA = hankel_project(A);
        Matrix Ynext = Y + hankel_project(2.0 * A - Y) - A;

        IterationRecord rec;
        rec.iter = it;
        rec.delta = relative_change(Ynext, Y);
        rec.feasibility = (A - PA).norm();
        const SvdTriple dec = svd(PA);
        rec.objective = objective(PA, dec.spectrum);
        rec.spectrum = dec.spectrum.to_vector();
        trace.records.push_back(std::move(rec));

        Y = std::move(Ynext);
        if (trace.records.back().delta <= cfg.tol && trace.records.back().feasibility <= cfg.tol) {
            trace.converged = true;
            break;
        }
    }
    return finish(std::move(method), mu, hankel_project(A), std::move(trace), cfg.rank_tol);
}

} // namespace detail

/// Envelope relaxation of the rank-K Hankel fit.
inline SolveResult dr_solve(const Signal &f, const SolverConfig &cfg) {
    const auto setup = detail::validate_solver_input(f, cfg);
    const EnvelopeProblem prob(setup.F, cfg.K, cfg.rank_tol);
    return detail::douglas_rachford(
        "envelope", std::nullopt, setup.F, cfg, [&](const Matrix &Y) { return prox_general(prob, cfg.rho, Y); },
        [&](const Matrix &A, const Spectrum &sigma) {
            return envelope_penalty(sigma, cfg.K) + (A - setup.F).squaredNorm();
        });
}

/// Nuclear-norm relaxation μ‖A‖_* + ‖A − F‖² + ι_Hankel(A). Its prox at Y is
/// nuclear_prox((F + ρY)/(1+ρ), μ/(1+ρ)).
inline SolveResult nuclear_solve(const Signal &f, double mu, const SolverConfig &cfg) {
    if (!(mu >= 0.0)) throw std::invalid_argument("nuclear_solve: mu must be non-negative");
    const auto setup = detail::validate_solver_input(f, cfg);
    const double w = 1.0 + cfg.rho;
    return detail::douglas_rachford(
        "nuclear", mu, setup.F, cfg,
        [&](const Matrix &Y) { return nuclear_prox((setup.F + cfg.rho * Y) / w, mu / w); },
        [&](const Matrix &A, const Spectrum &sigma) {
            return mu * sigma.values().sum() + (A - setup.F).squaredNorm();
        });
}

/// Cadzow iteration: A ← P_H(truncate_K(A)) from A = F until the change is below tol.
inline SolveResult cadzow_solve(const Signal &f, const SolverConfig &cfg) {
    const auto setup = detail::validate_solver_input(f, cfg);
    SolverTrace trace;
    Matrix A = setup.F;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        const SvdTriple dec = svd(A);
        const Matrix T = dec.compose(truncate(dec.spectrum, cfg.K));
        Matrix next = hankel_project(T);

        IterationRecord rec;
        rec.iter = it;
        rec.delta = detail::relative_change(next, A);
        rec.feasibility = (T - next).norm();
        rec.objective = (next - setup.F).squaredNorm();
        rec.spectrum = dec.spectrum.to_vector();
        trace.records.push_back(std::move(rec));

        A = std::move(next);
        if (trace.records.back().delta < cfg.tol) {
            trace.converged = true;
            break;
        }
    }
    return detail::finish("cadzow", std::nullopt, std::move(A), std::move(trace), cfg.rank_tol);
}

struct CompareRow {
    std::string method;
    std::optional<double> mu;
    double misfit = 0.0; // ‖signal − f‖²
    int rank = 0;
    int iterations = 0;
    bool converged = false;
};

struct CompareReport {
    std::vector<CompareRow> rows;
    /// Smallest μ on the grid whose nuclear solution has rank ≤ K.
    std::optional<double> mu_for_rank;
};

/// Runs the envelope, Cadzow and (per μ) nuclear solvers on the same data.
/// The solves are independent and run concurrently; rows come back in a fixed
/// order: envelope, cadzow, then nuclear in grid order.
inline CompareReport compare(const Signal &f, const SolverConfig &cfg, const std::vector<double> &mu_grid) {
    detail::validate_solver_input(f, cfg);
    for (double mu : mu_grid)
        if (!(mu >= 0.0)) throw std::invalid_argument("compare: mu grid entries must be non-negative");

    std::vector<std::future<SolveResult>> jobs;
    jobs.push_back(std::async(std::launch::async, [&] { return dr_solve(f, cfg); }));
    jobs.push_back(std::async(std::launch::async, [&] { return cadzow_solve(f, cfg); }));
    for (double mu : mu_grid) jobs.push_back(std::async(std::launch::async, [&, mu] { return nuclear_solve(f, mu, cfg); }));

    CompareReport report;
    for (auto &job : jobs) {
        const SolveResult r = job.get();
        CompareRow row;
        row.method = r.method;
        row.mu = r.mu;
        row.misfit = (r.signal.samples() - f.samples()).squaredNorm();
        row.rank = r.rank;
        row.iterations = r.trace.iterations();
        row.converged = r.trace.converged;
        if (r.mu && r.rank <= cfg.K && (!report.mu_for_rank || *r.mu < *report.mu_for_rank))
            report.mu_for_rank = r.mu;
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace fixrank
