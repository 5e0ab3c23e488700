#include "ampcdf/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ampcdf::special {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIterations = 10'000'000;

// Large-argument expansion of exp(-t) I_nu(t), valid for t > 30 where the
// smallest term is far below double precision.
double bessel_ie_asymptotic(double order, double t) {
    const double mu = 4.0 * order * order;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = -term * (mu - odd * odd) / (k * 8.0 * t);
        if (std::abs(next) >= std::abs(term)) {
            break;
        }
        term = next;
        sum += term;
        if (std::abs(term) < kEps * std::abs(sum)) {
            break;
        }
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * t);
}

// Power series of I_nu(t) for integer order, all terms positive.
double bessel_i_series(int order, double t) {
    const double q = 0.25 * t * t;
    double term = std::pow(0.5 * t, order) / std::tgamma(order + 1.0);
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * (k + order));
        sum += term;
        if (term < kEps * sum) {
            break;
        }
    }
    return sum;
}

// lgamma(k+1) - (k log k - k + 0.5 log(2 pi k)).
double stirling_correction(double k) {
    if (k < 15.0) {
        return std::lgamma(k + 1.0) - (k * std::log(k) - k + 0.5 * std::log(2.0 * std::numbers::pi * k));
    }
    const double inv = 1.0 / k;
    const double inv2 = inv * inv;
    return inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
}

// log1p(u) - u, accurate for small |u|.
double log1p_minus(double u) {
    if (std::abs(u) > 0.1) {
        return std::log1p(u) - u;
    }
    double power = u * u;
    double sum = 0.0;
    for (int n = 2; n < 60; ++n) {
        const double term = ((n % 2 == 0) ? -power : power) / n;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) {
            break;
        }
        power *= u;
    }
    return sum;
}

// Series for the regularized lower gamma P(a, x), x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0;
    double sum = 1.0;
    for (int n = 1; n < kMaxIterations; ++n) {
        term *= x / (a + n);
        sum += term;
        if (term < kEps * sum) {
            break;
        }
    }
    return std::exp(log_poisson_pmf(a, x)) * sum;
}

// Lentz continued fraction for Q(a, x), x >= a + 1.
double gamma_q_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            break;
        }
    }
    // exp(-x) x^a / Gamma(a) = a * exp(-x) x^a / Gamma(a + 1).
    return std::exp(log_poisson_pmf(a, x) + std::log(a)) * h;
}

} // namespace

double bessel_i0e(double t) {
    t = std::abs(t);
    if (t > 30.0) {
        return bessel_ie_asymptotic(0.0, t);
    }
    return bessel_i_series(0, t) * std::exp(-t);
}

double bessel_i1e(double t) {
    if (t < 0.0) {
        return -bessel_i1e(-t);
    }
    if (t > 30.0) {
        return bessel_ie_asymptotic(1.0, t);
    }
    return bessel_i_series(1, t) * std::exp(-t);
}

double log_poisson_pmf(double k, double mean) {
    if (k == 0.0) {
        return -mean;
    }
    if (mean == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    // k log(mean/k) + k - mean = k * (log1p(u) - u), u = mean/k - 1.
    const double u = (mean - k) / k;
    return k * log1p_minus(u) - 0.5 * std::log(2.0 * std::numbers::pi * k) - stirling_correction(k);
}

double gamma_q(double a, double x) {
    if (a <= 0.0) {
        throw std::invalid_argument("gamma_q: shape must be positive");
    }
    if (x <= 0.0) {
        return 1.0;
    }
    if (x < a + 1.0) {
        return std::clamp(1.0 - gamma_p_series(a, x), 0.0, 1.0);
    }
    return std::clamp(gamma_q_fraction(a, x), 0.0, 1.0);
}

double marcum_q1(double a, double b) {
    if (a < 0.0 || b < 0.0) {
        throw std::invalid_argument("marcum_q1: arguments must be nonnegative");
    }
    if (b == 0.0) {
        return 1.0;
    }
    const double x = 0.5 * b * b;
    if (a == 0.0) {
        return std::exp(-x);
    }
    if (std::isinf(b)) {
        return 0.0;
    }
    // Chernoff-type bounds: Q1 <= exp(-(b-a)^2/2) for b > a and
    // 1 - Q1 <= exp(-(a-b)^2/2) for a > b.
    if (b - a > 40.0) {
        return 0.0;
    }
    if (a - b > 40.0) {
        return 1.0;
    }
    const double lambda = 0.5 * a * a;

    // Q1(a, b) = sum_k Poisson(k; lambda) * Q(k + 1, x). Start at the Poisson
    // mode and walk outward; Q(k + 1, x) steps by the Poisson(x) pmf.
    constexpr double kCutoff = 1e-18;
    const double k0 = std::floor(lambda);
    const double p0 = std::exp(log_poisson_pmf(k0, lambda));
    const double g0 = gamma_q(k0 + 1.0, x);
    const double log_x = std::log(x);
    const double log_t0 = log_poisson_pmf(k0, x);

    double sum = p0 * g0;

    double p = p0;
    double g = g0;
    double log_t = log_t0;
    for (double k = k0; k < k0 + kMaxIterations; k += 1.0) {
        p *= lambda / (k + 1.0);
        log_t += log_x - std::log(k + 1.0);
        g = std::min(1.0, g + std::exp(log_t));
        sum += p * g;
        if (p < kCutoff && k > lambda) {
            break;
        }
    }

    p = p0;
    g = g0;
    log_t = log_t0;
    for (double k = k0; k > 0.0; k -= 1.0) {
        // g_k := Q(k + 1, x); Q(k, x) = Q(k + 1, x) - Poisson(k; x).
        g = std::max(0.0, g - std::exp(log_t));
        log_t -= log_x - std::log(k);
        p *= k / lambda;
        sum += p * g;
        if (p < kCutoff) {
            break;
        }
    }
    return std::clamp(sum, 0.0, 1.0);
}

double rician_pdf(double x, double nu, double s) {
    if (x < 0.0) {
        return 0.0;
    }
    const double s2 = s * s;
    const double d = x - nu;
    return x / s2 * std::exp(-0.5 * d * d / s2) * bessel_i0e(x * nu / s2);
}

double rician_cdf(double x, double nu, double s) {
    if (x <= 0.0) {
        return 0.0;
    }
    return 1.0 - marcum_q1(nu / s, x / s);
}

} // namespace ampcdf::special
