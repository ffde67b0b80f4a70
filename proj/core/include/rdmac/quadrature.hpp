#pragma once

#include <functional>
#include <span>
#include <vector>

namespace rdmac {

// Nodes/weights for integrals of the form  integral e^{-t^2} g(t) dt.
struct GaussHermite {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Computed by Newton iteration on the normalized recurrence; cached per order.
const GaussHermite& gauss_hermite(int n);

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

enum class QuadMethod { gauss_hermite, adaptive_simpson };

struct Quadrature {
    QuadMethod method = QuadMethod::gauss_hermite;
    int nodes = 200;
    double tol = 1e-9;
    // When set, evaluate with both methods and fail loudly if they disagree
    // by more than check_tol.
    bool cross_check = false;
    double check_tol = 1e-6;
};

// E_{N(mean, sigma2)}[g] under one quadrature method (no cross-check).
double gaussian_expectation(const std::function<double(double)>& g, double mean, double sigma2,
                            const Quadrature& quad);

// Differential entropy in bits of an equal-variance Gaussian mixture
// sum_j weights[j] N(means[j], sigma2). Honors cross_check.
double mixture_entropy_bits(std::span<const double> means, std::span<const double> weights,
                            double sigma2, const Quadrature& quad);

} // namespace rdmac
