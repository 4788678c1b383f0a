#ifndef MOLTRAP_TESTS_SUPPORT_HPP
#define MOLTRAP_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>
#include <vector>

#include "moltrap/qregister.hpp"

namespace test_support {

inline moltrap::qreg::RegisterState random_state(int n, std::mt19937_64& rng) {
    auto st = moltrap::qreg::RegisterState::basis(n);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double norm = 0;
    for (auto& a : st.amplitudes) {
        a = {gauss(rng), gauss(rng)};
        norm += std::norm(a);
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& a : st.amplitudes) a *= scale;
    return st;
}

/// Regularized upper incomplete gamma Q(a, x), series for x < a+1 and
/// continued fraction otherwise (Lentz).
inline double gamma_q(double a, double x) {
    if (x <= 0) return 1.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a, sum = term, ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - lg);
    }
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - lg) * h;
}

/// p-value of a chi-square statistic against expected counts.
inline double chi_square_pvalue(const std::vector<double>& observed,
                                const std::vector<double>& expected) {
    double chi2 = 0;
    int dof = -1;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0) continue;
        const double d = observed[i] - expected[i];
        chi2 += d * d / expected[i];
        ++dof;
    }
    if (dof < 1) return 1.0;
    return gamma_q(0.5 * dof, 0.5 * chi2);
}

}  // namespace test_support

#endif  // MOLTRAP_TESTS_SUPPORT_HPP
