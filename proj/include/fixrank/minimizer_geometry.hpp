#pragma once

// Global minimizers of the fixed-rank envelope. With φ the spectrum of F and
// J ≤ K ≤ L the block of indices where φ_j = φ_K, every minimizer of I** is
// U diag(α) Vᴴ for some SVD of F, with α_j = φ_j before J, zero after L, and
// (α_J..α_L)/φ_K in the polytope
//     Ω_{M,m} = { x ∈ R^M : Σ x = m, 1 ≥ x_1 ≥ … ≥ x_M ≥ 0 },
// M = L+1−J, m = K+1−J. The minimum value is Σ_{j>K} φ_j².

#include "fixrank/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace fixrank {

struct MinimizerSet {
    int J = 1;
    int L = 1;
    int M = 1;
    int m = 1;
    double phiK = 0.0;
    double min_value = 0.0;
    int K = 1;
    Spectrum phi;
    double mult_tol = 1e-9;

    /// φ_K is numerically zero; the simplex collapses and minimizers vanish from J on.
    [[nodiscard]] bool degenerate() const { return phiK <= mult_tol * std::max(1.0, phi[0]); }
};

inline MinimizerSet minimizer_set(const Spectrum &phi, int K, double mult_tol = 1e-9) {
    const int N = phi.size();
    detail::require_rank(K, 1, N, "minimizer_set");
    const double tol = mult_tol * std::max(1.0, phi[0]);
    const double phiK = phi.at1(K);

    MinimizerSet set;
    set.K = K;
    set.phi = phi;
    set.phiK = phiK;
    set.mult_tol = mult_tol;
    set.J = K;
    while (set.J > 1 && std::abs(phi.at1(set.J - 1) - phiK) <= tol) --set.J;
    set.L = K;
    while (set.L < N && std::abs(phi.at1(set.L + 1) - phiK) <= tol) ++set.L;
    set.M = set.L + 1 - set.J;
    set.m = K + 1 - set.J;
    set.min_value = phi.tail_squared(K);
    return set;
}

/// Spectrum of the minimizer whose (J..L) block is φ_K · x.
inline Spectrum lift_minimizer(const MinimizerSet &set, const Vector &x) {
    if (x.size() != set.M) throw std::invalid_argument("lift_minimizer: point must have M entries");
    Vector a = Vector::Zero(set.phi.size());
    for (int j = 1; j < set.J; ++j) a[j - 1] = set.phi.at1(j);
    for (int i = 0; i < set.M; ++i) a[set.J - 1 + i] = set.phiK * x[i];
    return Spectrum::from_rounded(std::move(a));
}

inline bool is_minimizer(const Spectrum &alpha, const MinimizerSet &set, double tol = 1e-9) {
    if (alpha.size() != set.phi.size()) throw std::invalid_argument("is_minimizer: length mismatch");
    const int N = alpha.size();
    const double scale = std::max(1.0, set.phi[0]);
    const double atol = tol * scale;

    for (int j = 1; j < set.J; ++j)
        if (std::abs(alpha.at1(j) - set.phi.at1(j)) > atol) return false;

    if (set.degenerate()) {
        for (int j = set.J; j <= N; ++j)
            if (alpha.at1(j) > atol) return false;
        return true;
    }

    for (int j = set.L + 1; j <= N; ++j)
        if (alpha.at1(j) > atol) return false;

    // x = α_{J..L}/φ_K; the ordering constraints already hold because α is a spectrum.
    double sum = 0.0;
    for (int j = set.J; j <= set.L; ++j) sum += alpha.at1(j) / set.phiK;
    if (std::abs(sum - set.m) > tol * set.M) return false;
    return alpha.at1(set.J) / set.phiK <= 1.0 + tol;
}

/// Vertices of Ω_{M,m}.
///
/// Writing x through its decrements d_i = x_i − x_{i+1} ≥ 0 turns Ω into
/// { d ≥ 0 : Σ d ≤ 1, Σ i·d_i = m }, whose basic solutions have at most two
/// non-zero decrements. The vertices are therefore
///   (m/p, …, m/p, 0, …)            p = m..M                (p copies)
///   (1, …, 1, c, …, c, 0, …)       1 ≤ i < m < k ≤ M,  c = (m−i)/(k−i)
/// with i ones and k−i copies of c. The first family comes first, in order
/// of p, followed by the second in (i, k) order.
inline std::vector<Vector> simplex_vertices(int M, int m) {
    if (M < 1 || m < 1 || m > M) throw std::invalid_argument("simplex_vertices: need 1 <= m <= M");
    std::vector<Vector> out;
    for (int p = m; p <= M; ++p) {
        Vector v = Vector::Zero(M);
        v.head(p).setConstant(static_cast<double>(m) / p);
        out.push_back(std::move(v));
    }
    for (int i = 1; i < m; ++i) {
        for (int k = m + 1; k <= M; ++k) {
            Vector v = Vector::Zero(M);
            v.head(i).setOnes();
            v.segment(i, k - i).setConstant(static_cast<double>(m - i) / (k - i));
            out.push_back(std::move(v));
        }
    }
    return out;
}

/// Seeded random convex combinations of the vertices of Ω_{M,m}.
inline std::vector<Vector> sample_simplex(int M, int m, int count, std::uint64_t seed) {
    const auto vertices = simplex_vertices(M, m);
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int n = 0; n < count; ++n) {
        std::vector<double> w(vertices.size());
        double total = 0.0;
        for (auto &wi : w) total += (wi = expo(rng));
        Vector x = Vector::Zero(M);
        for (std::size_t v = 0; v < vertices.size(); ++v) x += (w[v] / total) * vertices[v];
        // Re-impose the ordering against rounding.
        for (int i = 0; i < M; ++i) {
            x[i] = std::clamp(x[i], 0.0, 1.0);
            if (i > 0) x[i] = std::min(x[i], x[i - 1]);
        }
        out.push_back(std::move(x));
    }
    return out;
}

} // namespace fixrank
