#include "rdmac/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "rdmac/errors.hpp"

namespace rdmac {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// Eigenvalues of the Hermite Jacobi matrix (zero diagonal, off-diagonal
// sqrt(j/2)) via implicit-shift QL. Golub-Welsch seeds land within each
// root's Newton basin at any order; asymptotic guess chains do not.
std::vector<double> hermite_jacobi_eigenvalues(int n) {
    std::vector<double> d(n, 0.0), e(n, 0.0);
    for (int j = 1; j < n; ++j) e[j - 1] = std::sqrt(0.5 * j);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd + 1e-300) break;
            }
            if (m == l) break;
            if (iter++ == 50) throw tolerance_error("gauss_hermite: eigenvalue iteration stalled");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool split = false;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    // Rotation annihilated the coupling early; restart this eigenvalue.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    split = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if (split) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }
    std::sort(d.begin(), d.end(), std::greater<>());
    return d;
}

GaussHermite compute_gauss_hermite(int n) {
    if (n < 1) throw config_error("gauss_hermite: order must be >= 1");
    GaussHermite gh;
    gh.nodes.assign(n, 0.0);
    gh.weights.assign(n, 0.0);

    const std::vector<double> seeds = hermite_jacobi_eigenvalues(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Odd orders have an exact root at the origin.
        double z = (2 * i == n - 1) ? 0.0 : seeds[i];
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Normalized Hermite recurrence keeps values in range for large n.
            double p1 = std::pow(M_PI, -0.25);
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        gh.nodes[i] = z;
        gh.nodes[n - 1 - i] = -z;
        gh.weights[i] = 2.0 / (pp * pp);
        gh.weights[n - 1 - i] = gh.weights[i];
    }
    return gh;
}

double simpson_step(const std::function<double(double)>& f, double a, double m, double b,
                    double fa, double fm, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, lm, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           simpson_step(f, m, rm, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

} // namespace

const GaussHermite& gauss_hermite(int n) {
    static std::map<int, GaussHermite> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_hermite(n)).first;
    return it->second;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, m, b, fa, fm, fb, whole, tol, 48);
}

double gaussian_expectation(const std::function<double(double)>& g, double mean, double sigma2,
                            const Quadrature& quad) {
    if (!(sigma2 > 0.0)) throw config_error("gaussian_expectation: sigma2 must be positive");
    if (quad.method == QuadMethod::gauss_hermite) {
        const auto& gh = gauss_hermite(quad.nodes);
        const double scale = std::sqrt(2.0 * sigma2);
        double acc = 0.0;
        for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
            acc += gh.weights[i] * g(mean + scale * gh.nodes[i]);
        }
        return acc / kSqrtPi;
    }
    const double sigma = std::sqrt(sigma2);
    const double lo = mean - 12.0 * sigma, hi = mean + 12.0 * sigma;
    const double norm = 1.0 / std::sqrt(2.0 * M_PI * sigma2);
    auto integrand = [&](double y) {
        const double d = y - mean;
        return norm * std::exp(-d * d / (2.0 * sigma2)) * g(y);
    };
    return adaptive_simpson(integrand, lo, hi, quad.tol);
}

namespace {

double mixture_entropy_one(std::span<const double> means, std::span<const double> weights,
                           double sigma2, const Quadrature& quad) {
    const double log_norm = -0.5 * std::log(2.0 * M_PI * sigma2);
    auto log2_f = [&](double y) {
        double emax = -INFINITY;
        for (std::size_t j = 0; j < means.size(); ++j) {
            const double d = y - means[j];
            emax = std::max(emax, -d * d / (2.0 * sigma2));
        }
        double s = 0.0;
        for (std::size_t j = 0; j < means.size(); ++j) {
            const double d = y - means[j];
            s += weights[j] * std::exp(-d * d / (2.0 * sigma2) - emax);
        }
        return (emax + std::log(s) + log_norm) / M_LN2;
    };
    double h = 0.0;
    for (std::size_t j = 0; j < means.size(); ++j) {
        h -= weights[j] * gaussian_expectation(log2_f, means[j], sigma2, quad);
    }
    return h;
}

} // namespace

double mixture_entropy_bits(std::span<const double> means, std::span<const double> weights,
                            double sigma2, const Quadrature& quad) {
    if (means.size() != weights.size() || means.empty()) {
        throw dimension_error("mixture_entropy_bits: means/weights mismatch");
    }
    const double primary = mixture_entropy_one(means, weights, sigma2, quad);
    if (quad.cross_check) {
        Quadrature other = quad;
        other.cross_check = false;
        other.method = quad.method == QuadMethod::gauss_hermite ? QuadMethod::adaptive_simpson
                                                                : QuadMethod::gauss_hermite;
        const double check = mixture_entropy_one(means, weights, sigma2, other);
        if (std::abs(primary - check) > quad.check_tol) {
            throw tolerance_error("quadrature methods disagree: " + std::to_string(primary) +
                                  " vs " + std::to_string(check));
        }
    }
    return primary;
}

} // namespace rdmac
