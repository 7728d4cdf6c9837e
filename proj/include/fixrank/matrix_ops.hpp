#pragma once

// Matrix-level functionals of the fixed-rank approximation objective
// I(A) = R_K(A) + ‖A − F‖²: the objective itself, its Fenchel conjugate, its
// convex envelope, and the proximal operators of the envelope. All of them
// reduce to spectral_core through a shared singular basis (von Neumann).

#include "fixrank/spectral_core.hpp"

#include <Eigen/SVD>

#include <limits>
#include <string>

namespace fixrank {

struct SvdTriple {
    Matrix left;       // m × N, orthonormal columns
    Spectrum spectrum; // N = min(m, n)
    Matrix right;      // n × N, orthonormal columns

    [[nodiscard]] Matrix compose(const Spectrum &s) const { return left * s.values().asDiagonal() * right.transpose(); }
    [[nodiscard]] Matrix reconstruct() const { return compose(spectrum); }
};

inline SvdTriple svd(const Matrix &A) {
    if (A.size() == 0) throw std::invalid_argument("svd: empty matrix");
    if (!A.allFinite()) throw std::invalid_argument("svd: non-finite entries");
    Eigen::JacobiSVD<Matrix> dec(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {dec.matrixU(), Spectrum::from_rounded(dec.singularValues()), dec.matrixV()};
}

inline double inner(const Matrix &A, const Matrix &B) { return (A.array() * B.array()).sum(); }

/// Number of singular values above rank_tol · σ_1.
inline int numerical_rank(const Spectrum &sigma, double rank_tol) {
    const double cut = rank_tol * sigma[0];
    int r = 0;
    for (int j = 0; j < sigma.size(); ++j) r += sigma[j] > cut ? 1 : 0;
    return r;
}

/// Data matrix F, target rank K and the numerical-rank threshold. Holds the
/// SVD of F so repeated evaluations do not refactor it.
class EnvelopeProblem {
public:
    EnvelopeProblem(Matrix data, int K, double rank_tol = 1e-9)
        : data_(std::move(data)), K_(K), rank_tol_(rank_tol), svd_(fixrank::svd(data_)) {
        detail::require_rank(K_, 1, static_cast<int>(std::min(data_.rows(), data_.cols())), "EnvelopeProblem");
        if (!(rank_tol_ >= 0.0)) throw std::invalid_argument("EnvelopeProblem: rank_tol must be non-negative");
    }

    [[nodiscard]] const Matrix &data() const { return data_; }
    [[nodiscard]] int K() const { return K_; }
    [[nodiscard]] double rank_tol() const { return rank_tol_; }
    [[nodiscard]] const SvdTriple &data_svd() const { return svd_; }

    void require_shape(const Matrix &A, const char *what) const {
        if (A.rows() != data_.rows() || A.cols() != data_.cols())
            throw std::invalid_argument(std::string(what) + ": shape " + std::to_string(A.rows()) + "x" +
                                        std::to_string(A.cols()) + " does not match data " +
                                        std::to_string(data_.rows()) + "x" + std::to_string(data_.cols()));
    }

private:
    Matrix data_;
    int K_;
    double rank_tol_;
    SvdTriple svd_;
};

/// ‖A − F‖² if rank(A) ≤ K, +∞ otherwise.
inline double objective_I(const Matrix &A, const EnvelopeProblem &prob) {
    prob.require_shape(A, "objective_I");
    if (numerical_rank(svd(A).spectrum, prob.rank_tol()) > prob.K()) return std::numeric_limits<double>::infinity();
    return (A - prob.data()).squaredNorm();
}

/// I*(B) = Σ_{j≤K} σ_j(F + B/2)² − ‖F‖².
inline double conjugate_Istar(const Matrix &B, const EnvelopeProblem &prob) {
    prob.require_shape(B, "conjugate_Istar");
    const Spectrum gamma = svd(prob.data() + 0.5 * B).spectrum;
    return gamma.values().head(prob.K()).squaredNorm() - prob.data().squaredNorm();
}

/// I**(A), the convex envelope: envelope_penalty(σ(A), K) + ‖A − F‖².
/// Where I is finite (numerical rank ≤ K) the two agree and the penalty is
/// taken as 0, so sub-threshold singular values do not leave round-off behind.
inline double envelope_Ienv(const Matrix &A, const EnvelopeProblem &prob) {
    prob.require_shape(A, "envelope_Ienv");
    const Spectrum sigma = svd(A).spectrum;
    const double misfit = (A - prob.data()).squaredNorm();
    if (numerical_rank(sigma, prob.rank_tol()) <= prob.K()) return misfit;
    return envelope_penalty(sigma, prob.K()) + misfit;
}

/// A maximizer B* of ⟨A, B⟩ − I*(B), so that ⟨A, B*⟩ − I*(B*) = I**(A).
/// F + B*/2 shares singular vectors with A and has spectrum γ, where γ keeps
/// α on the head and replaces the pooled tail by ω_{k*}.
inline Matrix conjugate_witness(const Matrix &A, const EnvelopeProblem &prob) {
    prob.require_shape(A, "conjugate_witness");
    const SvdTriple dec = svd(A);
    const auto [k, omega] = k_star(dec.spectrum, prob.K());
    Vector gamma = dec.spectrum.values();
    gamma.tail(gamma.size() - (prob.K() - k)).setConstant(omega);
    return 2.0 * (dec.left * gamma.asDiagonal() * dec.right.transpose() - prob.data());
}

/// argmin_A I**(A) + ρ‖A − F‖².
inline Matrix prox_at_F(const EnvelopeProblem &prob, double rho) {
    detail::require_positive(rho, "prox_at_F");
    const SvdTriple &dec = prob.data_svd();
    return dec.compose(prox_spectrum_at_f(dec.spectrum, prob.K(), rho).alpha);
}

namespace detail {

inline Matrix prox_general_pooled(const EnvelopeProblem &prob, double rho, const Matrix &X) {
    const SvdTriple dec = svd(prob.data() + rho * X);
    const PooledZeta pooled = pooled_zeta(dec.spectrum, prob.K(), rho);
    const Vector alpha = (dec.spectrum.values() - pooled.zeta.values()) / rho;
    return dec.left * alpha.asDiagonal() * dec.right.transpose();
}

} // namespace detail

/// argmin_A I**(A) + ρ‖A − X‖² for an arbitrary centre X.
///
/// Same min-max argument as in the at-data case with G = F + ρX in place of
/// (1+ρ)F: the optimal dual variable shares singular vectors with G, its
/// spectrum ζ solves the pooled problem, and A = (G − Z)/ρ. At X = F this is
/// routed through prox_at_F so both entry points agree bit for bit.
inline Matrix prox_general(const EnvelopeProblem &prob, double rho, const Matrix &X) {
    prob.require_shape(X, "prox_general");
    detail::require_positive(rho, "prox_general");
    if (X == prob.data()) return prox_at_F(prob, rho);
    return detail::prox_general_pooled(prob, rho, X);
}

/// Best rank-K approximation (truncated SVD).
inline Matrix eckart_young(const Matrix &F, int K) {
    const SvdTriple dec = svd(F);
    return dec.compose(truncate(dec.spectrum, K));
}

/// argmin_A μ‖A‖_* + ‖A − F‖².
inline Matrix nuclear_prox(const Matrix &F, double mu) {
    if (!(mu >= 0.0)) throw std::invalid_argument("nuclear_prox: mu must be non-negative");
    const SvdTriple dec = svd(F);
    return dec.compose(soft_threshold(dec.spectrum, mu));
}

} // namespace fixrank
