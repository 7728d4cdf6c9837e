#include "fixrank/matrix_ops.hpp"
#include "fixrank/minimizer_geometry.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <set>

using namespace fixrank;
using Catch::Approx;

namespace {

bool same_point(const Vector &a, const Vector &b, double tol = 1e-12) {
    return a.size() == b.size() && (a - b).lpNorm<Eigen::Infinity>() <= tol;
}

bool contains(const std::vector<Vector> &set, const Vector &x, double tol = 1e-9) {
    return std::any_of(set.begin(), set.end(), [&](const Vector &v) { return same_point(v, x, tol); });
}

bool in_simplex(const Vector &x, int m, double tol = 1e-12) {
    if (std::abs(x.sum() - m) > tol) return false;
    if (x[0] > 1.0 + tol || x[x.size() - 1] < -tol) return false;
    for (Eigen::Index i = 1; i < x.size(); ++i)
        if (x[i] > x[i - 1] + tol) return false;
    return true;
}

Vector vec(std::initializer_list<double> v) { return Spectrum(v).values(); }

} // namespace

TEST_CASE("minimizer_set examples", "[minimizers]") {
    const auto a = minimizer_set(Spectrum{3, 2, 2, 2, 1}, 3);
    CHECK(a.J == 2);
    CHECK(a.L == 4);
    CHECK(a.M == 3);
    CHECK(a.m == 2);
    CHECK(a.phiK == 2.0);
    CHECK(a.min_value == 5.0);
    CHECK(a.min_value == objective_I(eckart_young(Matrix(vec({3, 2, 2, 2, 1}).asDiagonal()), 3),
                                     EnvelopeProblem(Matrix(vec({3, 2, 2, 2, 1}).asDiagonal()), 3)));

    const auto b = minimizer_set(Spectrum{2, 1}, 1);
    CHECK((b.J == 1 && b.L == 1 && b.M == 1 && b.m == 1));
    CHECK(b.min_value == 1.0);

    const auto c = minimizer_set(Spectrum{1, 1}, 1);
    CHECK((c.J == 1 && c.L == 2 && c.M == 2 && c.m == 1));
    CHECK(c.min_value == 1.0);

    CHECK_THROWS_AS(minimizer_set(Spectrum{1, 1}, 0), std::invalid_argument);
    CHECK_THROWS_AS(minimizer_set(Spectrum{1, 1}, 3), std::invalid_argument);
}

TEST_CASE("is_minimizer examples", "[minimizers]") {
    const auto set = minimizer_set(Spectrum{3, 2, 2, 2, 1}, 3);
    CHECK(is_minimizer(Spectrum{3, 2, 2, 0, 0}, set));
    CHECK_FALSE(is_minimizer(Spectrum{3, 2, 2, 2, 0}, set));
    CHECK_FALSE(is_minimizer(Spectrum{2, 1}, minimizer_set(Spectrum{2, 1}, 1)));
    CHECK_THROWS_AS(is_minimizer(Spectrum{1}, set), std::invalid_argument);

    const Matrix A = vec({3, 2, 2, 0, 0}).asDiagonal();
    const Matrix F = vec({3, 2, 2, 2, 1}).asDiagonal();
    CHECK(envelope_Ienv(A, EnvelopeProblem(F, 3)) == Approx(5.0).epsilon(1e-12));
}

TEST_CASE("is_minimizer with a zero K-th value", "[minimizers]") {
    const auto set = minimizer_set(Spectrum{2, 0, 0}, 2);
    CHECK(set.degenerate());
    CHECK(set.J == 2);
    CHECK(is_minimizer(Spectrum{2, 0, 0}, set));
    CHECK_FALSE(is_minimizer(Spectrum{2, 0.1, 0}, set));
    CHECK_FALSE(is_minimizer(Spectrum{1.9, 0, 0}, set));
}

TEST_CASE("simplex_vertices examples", "[minimizers][vertices]") {
    const auto a = simplex_vertices(2, 1);
    REQUIRE(a.size() == 2);
    CHECK(same_point(a[0], vec({1, 0})));
    CHECK(same_point(a[1], vec({0.5, 0.5})));

    // Ω_{3,2} also has the vertex (1, 1/2, 1/2), where x_1 = 1 and x_2 = x_3 are active.
    const auto b = simplex_vertices(3, 2);
    REQUIRE(b.size() == 3);
    CHECK(same_point(b[0], vec({1, 1, 0})));
    CHECK(same_point(b[1], vec({2.0 / 3, 2.0 / 3, 2.0 / 3})));
    CHECK(same_point(b[2], vec({1, 0.5, 0.5})));

    const auto c = simplex_vertices(1, 1);
    REQUIRE(c.size() == 1);
    CHECK(c[0][0] == 1.0);

    CHECK_THROWS_AS(simplex_vertices(2, 3), std::invalid_argument);
    CHECK_THROWS_AS(simplex_vertices(2, 0), std::invalid_argument);
}

TEST_CASE("simplex_vertices agree with the LP oracle", "[minimizers][vertices][property]") {
    oracle::Rng rng(31);
    for (int M = 1; M <= 6; ++M) {
        for (int m = 1; m <= M; ++m) {
            const auto verts = simplex_vertices(M, m);
            for (const auto &v : verts) CHECK(in_simplex(v, m));
            for (int trial = 0; trial < 50; ++trial) {
                Vector c(M);
                for (int i = 0; i < M; ++i) c[i] = rng.normal();
                const Vector x = oracle::simplex_lp_max(c, m);
                CHECK(contains(verts, x));
                // No vertex does better than the LP optimum.
                for (const auto &v : verts) CHECK(c.dot(v) <= c.dot(x) + 1e-12);
            }
        }
    }
}

TEST_CASE("sample_simplex", "[minimizers][samples]") {
    for (const auto &x : sample_simplex(1, 1, 5, 9)) CHECK(x[0] == 1.0);
    for (const auto &x : sample_simplex(2, 1, 100, 3)) {
        CHECK(x.sum() == Approx(1.0).margin(1e-12));
        CHECK(x[0] <= 1.0);
        CHECK(x[0] >= x[1]);
        CHECK(x[1] >= 0.0);
    }
    for (int M = 1; M <= 6; ++M)
        for (int m = 1; m <= M; ++m)
            for (const auto &x : sample_simplex(M, m, 40, 100 * M + m)) CHECK(in_simplex(x, m));

    const auto v = simplex_vertices(3, 2);
    const Vector mid = 0.5 * (v[0] + v[1]);
    CHECK(same_point(mid, vec({5.0 / 6, 5.0 / 6, 1.0 / 3})));
    CHECK(is_minimizer(lift_minimizer(minimizer_set(Spectrum{3, 2, 2, 2, 1}, 3), mid),
                       minimizer_set(Spectrum{3, 2, 2, 2, 1}, 3)));

    const auto s1 = sample_simplex(4, 2, 10, 77), s2 = sample_simplex(4, 2, 10, 77);
    for (std::size_t i = 0; i < s1.size(); ++i) CHECK(s1[i] == s2[i]);
}

TEST_CASE("lifted vertices and samples are global minimizers", "[minimizers][property]") {
    oracle::Rng rng(32);
    for (int trial = 0; trial < 40; ++trial) {
        // Spectrum with a repeated block around K.
        const int N = rng.integer(2, 7);
        Vector phi = oracle::random_spectrum(rng, N, 3.0);
        const int J = rng.integer(1, N), L = rng.integer(J, N);
        const double level = phi[J - 1];
        for (int j = J; j <= L; ++j) phi[j - 1] = level;
        const Spectrum p = Spectrum::from_rounded(phi);
        const int K = rng.integer(J, L);
        const auto set = minimizer_set(p, K);

        const Matrix U = oracle::random_orthonormal(rng, N + 1, N);
        const Matrix V = oracle::random_orthonormal(rng, N, N);
        const Matrix F = U * p.values().asDiagonal() * V.transpose();
        const EnvelopeProblem prob(F, K);

        std::vector<Vector> points = simplex_vertices(set.M, set.m);
        const auto samples = sample_simplex(set.M, set.m, 10, trial);
        points.insert(points.end(), samples.begin(), samples.end());
        for (const auto &x : points) {
            const Spectrum a = lift_minimizer(set, x);
            CHECK(is_minimizer(a, set));
            const Matrix A = U * a.values().asDiagonal() * V.transpose();
            CHECK(envelope_Ienv(A, prob) == Approx(set.min_value).margin(1e-9 * std::max(1.0, set.min_value)));
        }
    }
}

TEST_CASE("minimizer ranks span K to L", "[minimizers]") {
    // The extremes over the vertex set: the truncation (1,…,1,0,…) has rank
    // J−1+m = K, the flat vertex v_M has rank L.
    for (auto [phi, K] : std::vector<std::pair<Spectrum, int>>{{Spectrum{3, 2, 2, 2, 1}, 3},
                                                               {Spectrum{4, 1, 1, 1, 1, 0.5}, 2},
                                                               {Spectrum{2, 2, 2}, 1},
                                                               {Spectrum{5, 3, 1}, 2}}) {
        const auto set = minimizer_set(phi, K);
        int lo = phi.size() + 1, hi = 0;
        for (const auto &x : simplex_vertices(set.M, set.m)) {
            const int r = numerical_rank(lift_minimizer(set, x), 1e-12);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        CHECK(lo == K);
        CHECK(hi == set.L);
    }
}

TEST_CASE("multiplicity one accepts only the truncation", "[minimizers]") {
    const Spectrum phi{5, 3, 1, 0.5};
    const auto set = minimizer_set(phi, 2);
    REQUIRE(set.M == 1);
    const auto verts = simplex_vertices(set.M, set.m);
    REQUIRE(verts.size() == 1);
    CHECK(lift_minimizer(set, verts[0]) == truncate(phi, 2));
    CHECK(is_minimizer(truncate(phi, 2), set));
    CHECK_FALSE(is_minimizer(Spectrum{5, 3, 0.001, 0}, set));
    CHECK_FALSE(is_minimizer(Spectrum{5, 2.999, 0, 0}, set));
}
