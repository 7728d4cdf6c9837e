#pragma once

// Sequence-level mathematics of the fixed-rank convex envelope. Everything
// here acts on singular spectra only; the matrix layer lifts these through a
// shared SVD basis.

#include "fixrank/spectrum.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace fixrank {

struct KStarResult {
    int k_star = 1;     // group size, in [1, K]
    double omega = 0.0; // mean of the pooled tail β_{K-k*+1..N}
};

/// Relative tolerance used for every comparison in the pivot search.
inline constexpr double kPivotRelTol = 1e-12;

/// Pivot index of the envelope: the unique k in [1, K] with
/// β_{K-k+1} ≤ ω_k < β_{K-k}, where ω_k = (Σ_{j>K-k} β_j) / k and β_0 = +∞.
///
/// Computed as the largest k with β_{K-k+1} ≤ ω_k + tol, which is the same
/// index and does not depend on how near-ties round.
inline KStarResult k_star(const Spectrum &beta, int K) {
    const int N = beta.size();
    detail::require_rank(K, 1, N, "k_star");
    const double tol = kPivotRelTol * std::max(1.0, beta[0]);

    double tail = 0.0;
    for (int j = K + 1; j <= N; ++j) tail += beta.at1(j);

    KStarResult best{1, 0.0};
    double sum = tail;
    for (int k = 1; k <= K; ++k) {
        sum += beta.at1(K - k + 1);
        const double omega = sum / k;
        if (beta.at1(K - k + 1) <= omega + tol) best = {k, omega};
    }
    return best;
}

/// Rank penalty part of the envelope, k*·ω² − Σ_{j>K-k*} α_j². Non-negative,
/// and zero whenever α has at most K non-zero entries.
inline double envelope_penalty(const Spectrum &alpha, int K) {
    const auto [k, omega] = k_star(alpha, K);
    const double value = k * omega * omega - alpha.tail_squared(K - k);
    return std::max(value, 0.0);
}

/// φ with every entry after position K set to zero.
inline Spectrum truncate(const Spectrum &phi, int K) {
    detail::require_rank(K, 0, phi.size(), "truncate");
    Vector out = phi.values();
    out.tail(phi.size() - K).setZero();
    return Spectrum(std::move(out));
}

struct PooledZeta {
    double s = 0.0;
    Spectrum zeta;
};

/// Minimizer over non-increasing ζ of Σ_j (ζ_j − g_j)² + ρ Σ_{j≤K} ζ_j².
///
/// The unconstrained minimizer is g_j/(1+ρ) on the head and g_j on the tail;
/// both pieces are non-increasing, so the only possible violation sits at the
/// K/K+1 junction and the optimum pools a block around it to a common value
/// s ∈ [g_K/(1+ρ), g_{K+1}]. s minimizes a convex piecewise quadratic and is
/// found exactly by scanning its breakpoints.
inline PooledZeta pooled_zeta(const Spectrum &g, int K, double rho) {
    const int N = g.size();
    detail::require_rank(K, 1, N, "pooled_zeta");
    detail::require_positive(rho, "pooled_zeta");

    const double w = 1.0 + rho;
    const double lo = g.at1(K) / w;
    const double hi = g.at1(K + 1);

    auto zeta_at = [&](double s) {
        Vector z(N);
        for (int j = 1; j <= N; ++j) z[j - 1] = j <= K ? std::max(g.at1(j) / w, s) : std::min(g.at1(j), s);
        return z;
    };

    if (lo >= hi) return {lo, Spectrum::from_rounded(zeta_at(lo))};

    // ψ(s) up to an additive constant.
    auto psi = [&](double s) {
        double acc = 0.0;
        for (int j = 1; j <= K; ++j) {
            const double d = std::max(g.at1(j) / w, s) - g.at1(j) / w;
            acc += w * d * d;
        }
        for (int j = K + 1; j <= N; ++j) {
            const double d = std::min(g.at1(j), s) - g.at1(j);
            acc += d * d;
        }
        return acc;
    };

    std::vector<double> knots{lo, hi};
    for (int j = 1; j <= K; ++j) {
        const double t = g.at1(j) / w;
        if (t > lo && t < hi) knots.push_back(t);
    }
    for (int j = K + 1; j <= N; ++j) {
        if (g.at1(j) > lo && g.at1(j) < hi) knots.push_back(g.at1(j));
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    double best_s = lo;
    double best_psi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double a = knots[i];
        const double b = knots[i + 1];
        const double mid = 0.5 * (a + b);
        // On (a, b) the clamped head entries are those with g_j/(1+ρ) < s and
        // the clamped tail entries those with g_j > s; ψ' vanishes at the
        // pooled mean Σ g_j / ((1+ρ)|head| + |tail|).
        double num = 0.0;
        double den = 0.0;
        for (int j = 1; j <= K; ++j) {
            if (g.at1(j) / w < mid) {
                num += g.at1(j);
                den += w;
            }
        }
        for (int j = K + 1; j <= N; ++j) {
            if (g.at1(j) > mid) {
                num += g.at1(j);
                den += 1.0;
            }
        }
        const double s = den > 0.0 ? std::clamp(num / den, a, b) : a;
        const double value = psi(s);
        if (value < best_psi) {
            best_psi = value;
            best_s = s;
        }
    }
    return {best_s, Spectrum::from_rounded(zeta_at(best_s))};
}

/// Spectral solution of the at-data proximal problem, in the pooled
/// (s, k1, k2) form: α_j = φ_j before k1, φ_j − (s − φ_j)/ρ on [k1, k2],
/// zero after k2. k1 > k2 means the middle block is empty.
struct ProxBreakdown {
    double s = 0.0;
    int k1 = 1;
    int k2 = 0;
    Spectrum zeta;
    Spectrum alpha;
    bool truncated = false; // gap condition φ_K ≥ (1+ρ)φ_{K+1} held
};

inline ProxBreakdown prox_spectrum_at_f(const Spectrum &phi, int K, double rho) {
    const int N = phi.size();
    detail::require_rank(K, 1, N, "prox_spectrum_at_f");
    detail::require_positive(rho, "prox_spectrum_at_f");

    const double w = 1.0 + rho;
    ProxBreakdown out;
    const Spectrum g(Vector(w * phi.values()));

    const bool gap = phi.at1(K) >= w * phi.at1(K + 1);
    if (gap) {
        out.s = phi.at1(K);
        Vector z = g.values();
        z.head(K) = phi.values().head(K);
        out.zeta = Spectrum::from_rounded(std::move(z));
    } else {
        auto pooled = pooled_zeta(g, K, rho);
        out.s = pooled.s;
        out.zeta = std::move(pooled.zeta);
    }

    out.k1 = N + 1;
    for (int j = 1; j <= N; ++j) {
        if (phi.at1(j) < out.s) {
            out.k1 = j;
            break;
        }
    }
    out.k2 = 0;
    for (int j = N; j >= 1; --j) {
        if (phi.at1(j) > out.s / w) {
            out.k2 = j;
            break;
        }
    }

    if (gap) {
        out.alpha = truncate(phi, K);
        out.truncated = true;
        return out;
    }

    Vector a(N);
    for (int j = 1; j <= N; ++j) {
        const double p = phi.at1(j);
        if (j < out.k1)
            a[j - 1] = p;
        else if (j <= out.k2)
            a[j - 1] = p - (out.s - p) / rho;
        else
            a[j - 1] = 0.0;
    }
    out.alpha = Spectrum::from_rounded(std::move(a));
    return out;
}

/// Entrywise minimizer of μ t + (t − φ_j)² over t ≥ 0.
inline Spectrum soft_threshold(const Spectrum &phi, double mu) {
    if (!(mu >= 0.0)) throw std::invalid_argument("soft_threshold: mu must be non-negative");
    return Spectrum((phi.values().array() - 0.5 * mu).cwiseMax(0.0).matrix());
}

} // namespace fixrank
