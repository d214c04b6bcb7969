#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "tontine/core.hpp"

namespace tontine {

double annuity_future_value_factor(double rate, int years) {
    if (rate == 0.0) {
        return static_cast<double>(years);
    }
    return std::expm1(years * std::log1p(rate)) / rate;
}

double annuity_present_value_factor(double rate, int years) {
    if (rate == 0.0) {
        return static_cast<double>(years);
    }
    return -std::expm1(-years * std::log1p(rate)) / rate;
}

double annuity_irr(double contribution, int contribution_years, double benefit, int benefit_years) {
    if (!(contribution > 0.0) || contribution_years <= 0 || !(benefit > 0.0) || benefit_years <= 0) {
        throw std::invalid_argument("annuity_irr: all inputs must be positive");
    }

    // Positive when accumulated contributions exceed discounted benefits;
    // increasing in the rate.
    auto gap = [&](double r) {
        const double fv = contribution * annuity_future_value_factor(r, contribution_years);
        const double pv = benefit * annuity_present_value_factor(r, benefit_years);
        return std::pair{fv - pv, std::max(std::abs(fv), std::abs(pv))};
    };

    double lo = -0.99;
    double hi = 1.0;
    double f_lo = gap(lo).first;
    const double f_hi = gap(hi).first;
    if (std::signbit(f_lo) == std::signbit(f_hi)) {
        throw std::domain_error("no IRR in range");
    }

    constexpr double kRelTol = 1e-10;
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        const auto [f_mid, scale] = gap(mid);
        if (std::abs(f_mid) <= kRelTol * scale || hi - lo <= 1e-16) {
            break;
        }
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return mid;
}

}  // namespace tontine
