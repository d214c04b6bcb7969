#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

namespace tontine {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

/// True for scalars with exact arithmetic (rationals); tolerances collapse
/// to equality for them.
template <typename Scalar>
inline constexpr bool is_exact_v = !std::is_floating_point_v<Scalar>;

/// Relative tolerance used for probability normalisation checks.
inline constexpr double kProbabilityTolerance = 1e-12;

/// Relative tolerance used for currency identities (self-financing etc.).
inline constexpr double kCurrencyTolerance = 1e-9;

template <typename Scalar>
double to_double(const Scalar& x) {
    return static_cast<double>(x);
}

template <typename Scalar>
Scalar abs_value(const Scalar& x) {
    return x < Scalar(0) ? Scalar(-x) : x;
}

/// |a - b| <= rel * max(|a|, |b|), or exact equality for exact scalars.
template <typename Scalar>
bool relatively_close(const Scalar& a, const Scalar& b, double rel) {
    if constexpr (is_exact_v<Scalar>) {
        return a == b;
    } else {
        const Scalar scale = std::max(std::abs(a), std::abs(b));
        return std::abs(a - b) <= rel * scale;
    }
}

/// Neumaier-compensated accumulator. Exact scalars just add.
template <typename Scalar>
class CompensatedSum {
public:
    CompensatedSum() = default;
    explicit CompensatedSum(Scalar init) : sum_(std::move(init)) {}

    void add(const Scalar& x) {
        if constexpr (is_exact_v<Scalar>) {
            sum_ += x;
        } else {
            const Scalar t = sum_ + x;
            if (std::abs(sum_) >= std::abs(x)) {
                carry_ += (sum_ - t) + x;
            } else {
                carry_ += (x - t) + sum_;
            }
            sum_ = t;
        }
    }

    CompensatedSum& operator+=(const Scalar& x) {
        add(x);
        return *this;
    }

    Scalar value() const {
        if constexpr (is_exact_v<Scalar>) {
            return sum_;
        } else {
            return sum_ + carry_;
        }
    }

private:
    Scalar sum_{0};
    Scalar carry_{0};
};

/// Element-wise compensated accumulation of fixed-length vectors.
template <typename Scalar>
class CompensatedVectorSum {
public:
    explicit CompensatedVectorSum(Index size) : sums_(static_cast<std::size_t>(size)) {}

    template <typename Derived>
    void add(const Eigen::MatrixBase<Derived>& v) {
        for (Index i = 0; i < v.size(); ++i) {
            sums_[static_cast<std::size_t>(i)].add(v(i));
        }
    }

    template <typename Derived>
    void add_scaled(const Scalar& weight, const Eigen::MatrixBase<Derived>& v) {
        for (Index i = 0; i < v.size(); ++i) {
            sums_[static_cast<std::size_t>(i)].add(weight * v(i));
        }
    }

    Vector<Scalar> value() const {
        Vector<Scalar> out(static_cast<Index>(sums_.size()));
        for (std::size_t i = 0; i < sums_.size(); ++i) {
            out(static_cast<Index>(i)) = sums_[i].value();
        }
        return out;
    }

private:
    std::vector<CompensatedSum<Scalar>> sums_;
};

}  // namespace tontine
