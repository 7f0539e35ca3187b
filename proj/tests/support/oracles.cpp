#include "support/oracles.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace encod::testkit {
namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
    return adaptive(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
           adaptive(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double eps) {
    // Split into panels first so narrow peaks are not missed by the initial estimate.
    const int panels = 64;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + (b - a) * i / panels;
        const double hi = a + (b - a) * (i + 1) / panels;
        const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
        total += adaptive(f, lo, hi, fa, fm, fb, simpson(f, lo, hi, fa, fm, fb), eps / panels, 40);
    }
    return total;
}

}  // namespace

double chi_square_cdf_by_quadrature(double x, int df) {
    if (x <= 0) return 0.0;
    const double k = df / 2.0;
    const double log_norm = k * std::log(2.0) + std::lgamma(k);
    auto pdf = [&](double t) {
        if (t <= 0) return df == 2 ? 0.5 : 0.0;
        return std::exp((k - 1.0) * std::log(t) - t / 2.0 - log_norm);
    };
    // Lower side in u = sqrt(t), which removes the t^(-1/2) singularity at df = 1.
    auto pdf_sqrt = [&](double u) {
        if (u <= 0) return df == 1 ? std::exp(std::log(2.0) - log_norm) : 0.0;
        return std::exp(std::log(2.0) + (2.0 * k - 1.0) * std::log(u) - u * u / 2.0 - log_norm);
    };
    // Integrate whichever tail is shorter; the density beyond mean + 40 sd is negligible.
    const double hi = df + 40.0 * std::sqrt(2.0 * df) + 100.0;
    if (x < df) return integrate(pdf_sqrt, 0.0, std::sqrt(x), 1e-13);
    return 1.0 - integrate(pdf, x, std::max(hi, x + 1.0), 1e-13);
}

double normal_cdf_by_quadrature(double z) {
    auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
    if (z <= 0) return integrate(pdf, -40.0, z, 1e-14);
    return 1.0 - integrate(pdf, z, 40.0, 1e-14);
}

std::vector<std::uint8_t> random_bytes(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> out(n);
    for (std::size_t i = 0; i < n; i += 8) {
        const std::uint64_t v = rng();
        for (std::size_t j = 0; j < 8 && i + j < n; ++j) out[i + j] = static_cast<std::uint8_t>(v >> (8 * j));
    }
    return out;
}

double monobit_reference(const std::vector<int>& bits) {
    double s = 0;
    for (int b : bits) s += b ? 1 : -1;
    const double sobs = std::fabs(s) / std::sqrt(static_cast<double>(bits.size()));
    return std::erfc(sobs / std::sqrt(2.0));
}

}  // namespace encod::testkit
