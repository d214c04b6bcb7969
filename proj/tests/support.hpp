#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "oracles.hpp"
#include "tontine/fairness.hpp"

namespace fixture {

using Rational = boost::multiprecision::cpp_rational;
using tontine::Index;
using tontine::Pool;
using tontine::Vector;

template <typename S>
Vector<S> vec(std::initializer_list<S> values) {
    Vector<S> v(static_cast<Index>(values.size()));
    Index i = 0;
    for (const auto& x : values) {
        v(i++) = x;
    }
    return v;
}

// Three participants investing 80, 50, 20 with survival probabilities
// 0.2, 0.5, 0.8, no administrator money, zero return.
template <typename S>
Pool<S> worked_example() {
    if constexpr (std::is_same_v<S, double>) {
        return {vec<S>({80, 50, 20}), vec<S>({0.2, 0.5, 0.8}), 0.0, 0.0};
    } else {
        return {vec<S>({S(80), S(50), S(20)}), vec<S>({S(1) / 5, S(1) / 2, S(4) / 5}), S(0), S(0)};
    }
}

// Columns of the printed table in their printed order, as bitmasks.
inline constexpr std::uint64_t kTableOrder[8] = {7, 6, 4, 5, 3, 1, 2, 0};
// Printed DM payouts (two decimals) per column, participants then administrator.
inline constexpr double kTablePayouts[8][4] = {
    {114.29, 28.57, 7.14, 0},   {0, 120, 30, 0},   {0, 0, 150, 0}, {141.18, 0, 8.82, 0},
    {120, 30, 0, 0},           {150, 0, 0, 0},    {0, 150, 0, 0}, {0, 0, 0, 150},
};
// Printed scenario probabilities in percent.
inline constexpr int kTablePercent[8] = {8, 32, 32, 8, 2, 2, 8, 8};

struct RandomPools {
    explicit RandomPools(std::uint64_t seed) : rng(seed) {}

    // n in [lo, hi], pi in (1, 100), p in (0.05, 0.95).
    Pool<double> next(Index lo, Index hi, double admin_max = 0.0) {
        std::uniform_int_distribution<Index> size(lo, hi);
        std::uniform_real_distribution<double> invest(1.0, 100.0);
        std::uniform_real_distribution<double> prob(0.05, 0.95);
        std::uniform_real_distribution<double> rate(0.0, 0.1);
        const Index n = size(rng);
        Pool<double> pool;
        pool.investments.resize(n);
        pool.survival_probs.resize(n);
        for (Index i = 0; i < n; ++i) {
            pool.investments(i) = invest(rng);
            pool.survival_probs(i) = prob(rng);
        }
        pool.admin_investment = admin_max > 0.0 ? std::uniform_real_distribution<double>(0.0, admin_max)(rng) : 0.0;
        pool.period_return = rate(rng);
        return pool;
    }

    Vector<double> positive(Index n, double lo = 0.1, double hi = 10.0) {
        std::uniform_real_distribution<double> d(lo, hi);
        Vector<double> v(n);
        for (Index i = 0; i < n; ++i) {
            v(i) = d(rng);
        }
        return v;
    }

    std::mt19937_64 rng;
};

inline oracle::Fund to_fund(const Pool<double>& pool) {
    oracle::Fund fund;
    fund.investments.assign(pool.investments.data(), pool.investments.data() + pool.size());
    fund.probs.assign(pool.survival_probs.data(), pool.survival_probs.data() + pool.size());
    fund.admin = pool.admin_investment;
    fund.rate = pool.period_return;
    return fund;
}

inline std::vector<double> to_std(const Vector<double>& v) { return {v.data(), v.data() + v.size()}; }

inline bool rel_close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace fixture
