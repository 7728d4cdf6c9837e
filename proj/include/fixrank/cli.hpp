#pragma once

// Command-line front end. `run` is the whole program; main() only forwards.
//
// Exit codes: 0 success, 2 input parse error, 3 dimension or parameter error,
// 4 hankel-approx did not converge (the report is still written).

#include "fixrank/io.hpp"
#include "fixrank/matrix_ops.hpp"
#include "fixrank/minimizer_geometry.hpp"
#include "fixrank/report.hpp"
#include "fixrank/solver.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fixrank::cli {

enum ExitCode : int { kOk = 0, kParseError = 2, kParameterError = 3, kNotConverged = 4 };

namespace detail {

struct Options {
    std::string matrix_a, matrix_f, signal;
    int K = 0;
    std::optional<double> rho, tau;
    double mu = 0.0;
    std::string mu_grid;
    int iters = 5000;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    int rows = 0;
    std::string method = "envelope";
    std::string output;
    std::string signal_out, trace_out;
    int samples = 0;
};

inline double resolve_rho(const Options &o) {
    if (o.rho && o.tau) throw std::invalid_argument("--rho and --tau are mutually exclusive");
    if (o.tau) return rho_from_tau(*o.tau);
    const double rho = o.rho.value_or(1.0);
    fixrank::detail::require_positive(rho, "--rho");
    return rho;
}

inline Json spectrum_json(const Spectrum &s) { return encode_vector(s.values()); }

inline void emit(const Report &report, const Options &o, std::ostream &out) {
    if (o.output.empty())
        out << report.dump();
    else
        io::write_file(o.output, report.dump());
}

inline SolverConfig solver_config(const Options &o) {
    SolverConfig cfg;
    cfg.K = o.K;
    cfg.rho = resolve_rho(o);
    cfg.max_iters = o.iters;
    cfg.tol = o.tol;
    cfg.seed = o.seed;
    cfg.rows = o.rows;
    return cfg;
}

inline Json solver_parameters(const Options &o, const SolverConfig &cfg) {
    Json p = {{"K", cfg.K},     {"rho", encode_real(cfg.rho)}, {"iters", cfg.max_iters}, {"tol", encode_real(cfg.tol)},
              {"seed", cfg.seed}, {"rows", cfg.rows}};
    if (o.tau) p["tau"] = encode_real(*o.tau);
    return p;
}

inline Report cmd_eval(const Options &o) {
    const std::string a_text = io::read_file(o.matrix_a);
    const std::string f_text = io::read_file(o.matrix_f);
    const Matrix A = io::parse_matrix(a_text, o.matrix_a);
    const Matrix F = io::parse_matrix(f_text, o.matrix_f);
    if (A.rows() != F.rows() || A.cols() != F.cols()) throw std::invalid_argument("A and F shapes differ");
    const EnvelopeProblem prob(F, o.K);

    const SvdTriple dec = svd(A);
    const KStarResult ks = k_star(dec.spectrum, o.K);
    const double penalty = envelope_penalty(dec.spectrum, o.K);
    const double ienv = envelope_Ienv(A, prob);
    const Matrix B = conjugate_witness(A, prob);
    const double witness = inner(A, B) - conjugate_Istar(B, prob);

    Report r;
    r.command = "eval";
    r.input_digest = io::digest({a_text, f_text});
    r.parameters = {{"K", o.K}};
    r.results = {{"objective_I", encode_real(objective_I(A, prob))},
                 {"envelope_Ienv", encode_real(ienv)},
                 {"penalty", encode_real(penalty)},
                 {"misfit", encode_real((A - F).squaredNorm())},
                 {"k_star", ks.k_star},
                 {"omega", encode_real(ks.omega)},
                 {"witness_value", encode_real(witness)},
                 {"witness_gap", encode_real(std::abs(witness - ienv))},
                 {"spectrum", spectrum_json(dec.spectrum)}};
    return r;
}

inline Report cmd_prox(const Options &o) {
    const std::string f_text = io::read_file(o.matrix_f);
    const Matrix F = io::parse_matrix(f_text, o.matrix_f);
    const double rho = resolve_rho(o);
    const EnvelopeProblem prob(F, o.K);
    const ProxBreakdown br = prox_spectrum_at_f(prob.data_svd().spectrum, o.K, rho);
    const Matrix P = prob.data_svd().compose(br.alpha);

    Report r;
    r.command = "prox";
    r.input_digest = io::digest({f_text});
    r.parameters = {{"K", o.K}, {"rho", encode_real(rho)}};
    if (o.tau) r.parameters["tau"] = encode_real(*o.tau);
    r.results = {{"s", encode_real(br.s)},
                 {"k1", br.k1},
                 {"k2", br.k2},
                 {"phi", spectrum_json(prob.data_svd().spectrum)},
                 {"zeta", spectrum_json(br.zeta)},
                 {"alpha", spectrum_json(br.alpha)},
                 {"truncation", br.truncated},
                 {"objective", encode_real(envelope_Ienv(P, prob) + rho * (P - F).squaredNorm())},
                 {"prox", encode_matrix(P)}};
    return r;
}

inline Report cmd_minimizers(const Options &o) {
    const std::string f_text = io::read_file(o.matrix_f);
    const Matrix F = io::parse_matrix(f_text, o.matrix_f);
    if (o.samples < 0) throw std::invalid_argument("--samples must be non-negative");
    const Spectrum phi = svd(F).spectrum;
    const MinimizerSet set = minimizer_set(phi, o.K);

    Json vertices = Json::array();
    std::vector<Spectrum> seen;
    for (const auto &x : simplex_vertices(set.M, set.m)) {
        Spectrum a = lift_minimizer(set, x);
        if (set.degenerate() && !seen.empty()) break; // all vertices lift to the same spectrum
        seen.push_back(a);
        vertices.push_back(spectrum_json(a));
    }
    Json samples = Json::array();
    for (const auto &x : sample_simplex(set.M, set.m, o.samples, o.seed))
        samples.push_back(spectrum_json(lift_minimizer(set, x)));

    Report r;
    r.command = "minimizers";
    r.input_digest = io::digest({f_text});
    r.parameters = {{"K", o.K}, {"samples", o.samples}, {"seed", o.seed}};
    r.results = {{"J", set.J},
                 {"L", set.L},
                 {"M", set.M},
                 {"m", set.m},
                 {"phiK", encode_real(set.phiK)},
                 {"min_value", encode_real(set.min_value)},
                 {"phi", spectrum_json(phi)},
                 {"vertices", vertices},
                 {"samples", samples}};
    return r;
}

inline Report cmd_hankel_approx(const Options &o, bool &converged) {
    const std::string f_text = io::read_file(o.signal);
    const Signal f = io::parse_signal(f_text, o.signal);
    const SolverConfig cfg = solver_config(o);

    SolveResult res;
    if (o.method == "envelope")
        res = dr_solve(f, cfg);
    else if (o.method == "nuclear")
        res = nuclear_solve(f, o.mu, cfg);
    else if (o.method == "cadzow")
        res = cadzow_solve(f, cfg);
    else
        throw std::invalid_argument("unknown --method " + o.method);

    const std::string stem = o.output.empty() ? o.signal : o.output;
    const std::string signal_path = o.signal_out.empty() ? stem + ".approx.txt" : o.signal_out;
    const std::string trace_path = o.trace_out.empty() ? stem + ".trace.csv" : o.trace_out;
    io::write_file(signal_path, io::format_signal(res.signal));
    io::write_file(trace_path, io::format_trace(res.trace));

    converged = res.trace.converged;
    const auto &last = res.trace.records.back();

    Report r;
    r.command = "hankel-approx";
    r.input_digest = io::digest({f_text});
    r.parameters = solver_parameters(o, cfg);
    r.parameters["method"] = o.method;
    if (o.method == "nuclear") r.parameters["mu"] = encode_real(o.mu);
    r.results = {{"converged", res.trace.converged},
                 {"iterations", res.trace.iterations()},
                 {"misfit", encode_real((res.signal.samples() - f.samples()).squaredNorm())},
                 {"rank", res.rank},
                 {"objective", encode_real(last.objective)},
                 {"feasibility", encode_real(last.feasibility)},
                 {"delta", encode_real(last.delta)},
                 {"spectrum", last.spectrum},
                 {"signal", encode_vector(res.signal.samples())},
                 {"signal_path", signal_path},
                 {"trace_path", trace_path}};
    return r;
}

inline std::vector<double> parse_grid(const std::string &text) {
    std::vector<double> out;
    if (io::detail::trim(text).empty()) return out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = text.find(',', pos);
        try {
            out.push_back(io::detail::parse_real(
                std::string_view(text).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos),
                "--mu-grid"));
        } catch (const io::ParseError &e) {
            throw std::invalid_argument(e.what());
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline Report cmd_compare(const Options &o) {
    const std::string f_text = io::read_file(o.signal);
    const Signal f = io::parse_signal(f_text, o.signal);
    const SolverConfig cfg = solver_config(o);
    const std::vector<double> grid = parse_grid(o.mu_grid);
    const CompareReport cmp = compare(f, cfg, grid);

    Json rows = Json::array();
    for (const auto &row : cmp.rows) {
        Json j = {{"method", row.method},
                  {"misfit", encode_real(row.misfit)},
                  {"rank", row.rank},
                  {"iterations", row.iterations},
                  {"converged", row.converged}};
        j["mu"] = row.mu ? encode_real(*row.mu) : Json(nullptr);
        rows.push_back(std::move(j));
    }
    Json grid_json = Json::array();
    for (double mu : grid) grid_json.push_back(encode_real(mu));

    Report r;
    r.command = "compare";
    r.input_digest = io::digest({f_text});
    r.parameters = solver_parameters(o, cfg);
    r.parameters["mu_grid"] = grid_json;
    r.results = {{"rows", rows}, {"mu_for_rank", cmp.mu_for_rank ? encode_real(*cmp.mu_for_rank) : Json(nullptr)}};
    return r;
}

inline void add_rank(CLI::App *sub, Options &o) { sub->add_option("-K,--rank", o.K, "Target rank K")->required(); }

inline void add_solver_flags(CLI::App *sub, Options &o) {
    sub->add_option("--rho", o.rho, "Prox weight rho (default 1)");
    sub->add_option("--tau", o.tau, "Step tau; sets rho = 1/(2 tau)");
    sub->add_option("--iters", o.iters, "Maximum iterations")->capture_default_str();
    sub->add_option("--tol", o.tol, "Stopping tolerance")->capture_default_str();
    sub->add_option("--seed", o.seed, "Seed")->capture_default_str();
    sub->add_option("--rows", o.rows, "Hankel rows (default: most square)");
}

} // namespace detail

inline int run(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
    detail::Options o;
    CLI::App app{"Convex envelope tools for fixed-rank approximation"};
    app.require_subcommand(1);
    app.add_option("--output", o.output, "Write the JSON report here instead of stdout");

    auto *eval = app.add_subcommand("eval", "Evaluate I, I*, I** and the conjugate witness at A");
    eval->add_option("A", o.matrix_a, "Matrix file for A")->required();
    eval->add_option("F", o.matrix_f, "Matrix file for the data F")->required();
    detail::add_rank(eval, o);

    auto *prox = app.add_subcommand("prox", "Proximal operator of the envelope at F");
    prox->add_option("F", o.matrix_f, "Matrix file for the data F")->required();
    detail::add_rank(prox, o);
    prox->add_option("--rho", o.rho, "Prox weight rho (default 1)");
    prox->add_option("--tau", o.tau, "Step tau; sets rho = 1/(2 tau)");

    auto *mins = app.add_subcommand("minimizers", "Global minimizer geometry of the envelope");
    mins->add_option("F", o.matrix_f, "Matrix file for the data F")->required();
    detail::add_rank(mins, o);
    mins->add_option("--samples", o.samples, "Number of seeded simplex samples")->capture_default_str();
    mins->add_option("--seed", o.seed, "Sampling seed")->capture_default_str();

    auto *happ = app.add_subcommand("hankel-approx", "Rank-K Hankel approximation of a signal");
    happ->add_option("f", o.signal, "Signal file")->required();
    detail::add_rank(happ, o);
    detail::add_solver_flags(happ, o);
    happ->add_option("--method", o.method, "envelope | nuclear | cadzow")
        ->check(CLI::IsMember({"envelope", "nuclear", "cadzow"}))
        ->capture_default_str();
    happ->add_option("--mu", o.mu, "Nuclear-norm weight")->capture_default_str();
    happ->add_option("--signal-out", o.signal_out, "Output signal path (default <output|f>.approx.txt)");
    happ->add_option("--trace-out", o.trace_out, "Trace CSV path (default <output|f>.trace.csv)");

    auto *cmp = app.add_subcommand("compare", "Run envelope, Cadzow and nuclear-norm solvers side by side");
    cmp->add_option("f", o.signal, "Signal file")->required();
    detail::add_rank(cmp, o);
    detail::add_solver_flags(cmp, o);
    cmp->add_option("--mu-grid", o.mu_grid, "Comma-separated nuclear-norm weights");

    for (auto *sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return kParameterError;
    }

    try {
        if (eval->parsed()) {
            detail::emit(detail::cmd_eval(o), o, out);
        } else if (prox->parsed()) {
            detail::emit(detail::cmd_prox(o), o, out);
        } else if (mins->parsed()) {
            detail::emit(detail::cmd_minimizers(o), o, out);
        } else if (happ->parsed()) {
            bool converged = false;
            detail::emit(detail::cmd_hankel_approx(o, converged), o, out);
            if (!converged) {
                err << "hankel-approx: did not converge within " << o.iters << " iterations\n";
                return kNotConverged;
            }
        } else if (cmp->parsed()) {
            detail::emit(detail::cmd_compare(o), o, out);
        }
    } catch (const io::ParseError &e) {
        err << "parse error: " << e.what() << "\n";
        return kParseError;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kParameterError;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return kOk;
}

} // namespace fixrank::cli
