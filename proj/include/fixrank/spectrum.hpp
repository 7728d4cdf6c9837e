#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace fixrank {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Non-increasing, non-negative sequence of singular values.
///
/// Positions are 0-based in code. Index-valued results elsewhere in the
/// library (k*, k1, k2, J, L) are 1-based positions into the sequence, so
/// that "index j" in a report means the j-th largest singular value.
class Spectrum {
public:
    Spectrum() = default;

    explicit Spectrum(Vector values) : values_(std::move(values)) { validate(); }

    Spectrum(std::initializer_list<double> values) : values_(static_cast<Eigen::Index>(values.size())) {
        Eigen::Index i = 0;
        for (double v : values) values_[i++] = v;
        validate();
    }

    explicit Spectrum(const std::vector<double> &values)
        : values_(Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()))) {
        validate();
    }

    /// Builds a spectrum from values that are a valid spectrum up to rounding:
    /// negatives are clamped to zero and each entry is capped by its predecessor.
    static Spectrum from_rounded(Vector values) {
        for (Eigen::Index j = 0; j < values.size(); ++j) {
            values[j] = std::max(values[j], 0.0);
            if (j > 0) values[j] = std::min(values[j], values[j - 1]);
        }
        return Spectrum(std::move(values));
    }

    [[nodiscard]] int size() const { return static_cast<int>(values_.size()); }
    [[nodiscard]] double operator[](int j) const { return values_[j]; }
    [[nodiscard]] const Vector &values() const { return values_; }
    [[nodiscard]] std::vector<double> to_vector() const {
        return {values_.data(), values_.data() + values_.size()};
    }

    /// Entry at 1-based position j; 0 past the end (the virtual value φ_{N+1}).
    [[nodiscard]] double at1(int j) const { return j >= 1 && j <= size() ? values_[j - 1] : 0.0; }

    [[nodiscard]] double squared_norm() const { return values_.squaredNorm(); }

    /// Sum of squares of the entries at 1-based positions > j.
    [[nodiscard]] double tail_squared(int j) const {
        double acc = 0.0;
        for (int i = std::max(j, 0); i < size(); ++i) acc += values_[i] * values_[i];
        return acc;
    }

    friend bool operator==(const Spectrum &a, const Spectrum &b) {
        return a.values_.size() == b.values_.size() && (a.values_.array() == b.values_.array()).all();
    }

private:
    void validate() const {
        if (values_.size() < 1) throw std::invalid_argument("Spectrum: must have at least one entry");
        for (Eigen::Index j = 0; j < values_.size(); ++j) {
            if (!std::isfinite(values_[j]))
                throw std::invalid_argument("Spectrum: non-finite entry at position " + std::to_string(j + 1));
            if (values_[j] < 0.0)
                throw std::invalid_argument("Spectrum: negative entry at position " + std::to_string(j + 1));
            if (j > 0 && values_[j] > values_[j - 1])
                throw std::invalid_argument("Spectrum: entries must be non-increasing (position " +
                                            std::to_string(j + 1) + ")");
        }
    }

    Vector values_;
};

namespace detail {

inline void require_rank(int K, int lo, int hi, const char *what) {
    if (K < lo || K > hi)
        throw std::invalid_argument(std::string(what) + ": rank K=" + std::to_string(K) + " outside [" +
                                    std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

inline void require_positive(double rho, const char *what) {
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw std::invalid_argument(std::string(what) + ": rho must be a positive finite number");
}

} // namespace detail

} // namespace fixrank
