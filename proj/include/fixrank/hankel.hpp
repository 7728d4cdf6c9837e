#pragma once

#include "fixrank/spectrum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fixrank {

/// Finite real signal f_0..f_{P-1}.
class Signal {
public:
    Signal() = default;
    explicit Signal(Vector samples) : samples_(std::move(samples)) {
        if (samples_.size() < 1) throw std::invalid_argument("Signal: must have at least one sample");
        if (!samples_.allFinite()) throw std::invalid_argument("Signal: non-finite sample");
    }
    Signal(std::initializer_list<double> samples) : Signal(Vector(Eigen::Map<const Vector>(samples.begin(), static_cast<Eigen::Index>(samples.size())))) {}

    [[nodiscard]] int size() const { return static_cast<int>(samples_.size()); }
    [[nodiscard]] double operator[](int t) const { return samples_[t]; }
    [[nodiscard]] const Vector &samples() const { return samples_; }

private:
    Vector samples_;
};

/// Most-square Hankel shape for a length-P signal.
inline int default_hankel_rows(int P) { return (P + 1) / 2; }

/// H[i, j] = f[i + j], rows × (P − rows + 1).
inline Matrix hankel_from_signal(const Signal &f, int rows) {
    const int P = f.size();
    if (rows < 1 || rows > P)
        throw std::invalid_argument("hankel_from_signal: rows=" + std::to_string(rows) + " outside [1, " +
                                    std::to_string(P) + "]");
    const int cols = P - rows + 1;
    Matrix H(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) H(i, j) = f[i + j];
    return H;
}

/// Anti-diagonal means, length rows + cols − 1.
inline Signal signal_from_hankel(const Matrix &A) {
    if (A.size() == 0) throw std::invalid_argument("signal_from_hankel: empty matrix");
    const Eigen::Index P = A.rows() + A.cols() - 1;
    Vector sum = Vector::Zero(P);
    Vector count = Vector::Zero(P);
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        for (Eigen::Index i = 0; i < A.rows(); ++i) {
            sum[i + j] += A(i, j);
            count[i + j] += 1.0;
        }
    }
    return Signal(Vector(sum.array() / count.array()));
}

/// Orthogonal (Frobenius) projection onto Hankel matrices of the same shape.
inline Matrix hankel_project(const Matrix &A) {
    if (A.size() == 0) return A;
    return hankel_from_signal(signal_from_hankel(A), static_cast<int>(A.rows()));
}

} // namespace fixrank
