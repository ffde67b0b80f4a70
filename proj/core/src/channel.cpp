#include "rdmac/channel.hpp"

#include <cmath>

#include "rdmac/errors.hpp"

namespace rdmac {

bool JointPMF::normalize() {
    const double s = sum();
    if (s <= 0.0 || !std::isfinite(s)) {
        p = {0.25, 0.25, 0.25, 0.25};
        return false;
    }
    for (double& v : p) v /= s;
    return true;
}

ChannelParams::ChannelParams(double h1_in, double h2_in, double sigma2_in)
    : h1(h1_in), h2(h2_in), sigma2(sigma2_in) {
    if (!(sigma2 > 0.0)) throw config_error("ChannelParams: sigma2 must be positive");
    if (std::abs(h1) < std::abs(h2)) {
        throw config_error("ChannelParams: expected |h1| >= |h2| (user 1 is the stronger one)");
    }
    for (int o = 0; o < 4; ++o) {
        superimposed[o] = h1 * bpsk(joint_bit1(o)) + h2 * bpsk(joint_bit2(o));
    }
}

double snr_db_to_sigma2(double snr_db) { return 0.5 * std::pow(10.0, -snr_db / 10.0); }

double sigma2_to_snr_db(double sigma2) {
    if (!(sigma2 > 0.0)) throw config_error("sigma2 must be positive");
    return 10.0 * std::log10(1.0 / (2.0 * sigma2));
}

std::vector<double> modulate(std::span<const std::uint8_t> bits) {
    std::vector<double> x(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) x[i] = bpsk(bits[i]);
    return x;
}

std::vector<double> modulate(const BinVector& c) {
    std::vector<double> x(c.length, 1.0);
    for (int i : c.support) x[i] = -1.0;
    return x;
}

std::vector<double> transmit(std::span<const double> x1, std::span<const double> x2,
                             const ChannelParams& params, Rng& rng) {
    if (x1.size() != x2.size()) throw dimension_error("transmit: user block lengths differ");
    const double sigma = std::sqrt(params.sigma2);
    std::vector<double> y(x1.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = params.h1 * x1[i] + params.h2 * x2[i] + sigma * rng.gaussian();
    }
    return y;
}

JointPMF joint_channel_probs(double y, const ChannelParams& params) {
    // exp(-(y - point)^2 / (2 sigma2)), stabilized by the max exponent.
    std::array<double, 4> ex{};
    double emax = -INFINITY;
    for (int o = 0; o < 4; ++o) {
        const double d = y - params.superimposed[o];
        ex[o] = -d * d / (2.0 * params.sigma2);
        emax = std::max(emax, ex[o]);
    }
    JointPMF pmf;
    for (int o = 0; o < 4; ++o) pmf[o] = std::exp(ex[o] - emax);
    pmf.normalize();
    return pmf;
}

namespace {

// log(exp(a) + exp(b)) without overflow.
double logadd(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == -INFINITY) return a;
    return a + std::log1p(std::exp(b - a));
}

double log_gauss_exponent(double y, double mean, double sigma2) {
    const double d = y - mean;
    return -d * d / (2.0 * sigma2);
}

} // namespace

double nc_llr(double y, const ChannelParams& params) {
    // c = 0 on joint symbols {0, 3}, c = 1 on {1, 2}.
    const auto& pt = params.superimposed;
    const double num = logadd(log_gauss_exponent(y, pt[0], params.sigma2),
                              log_gauss_exponent(y, pt[3], params.sigma2));
    const double den = logadd(log_gauss_exponent(y, pt[1], params.sigma2),
                              log_gauss_exponent(y, pt[2], params.sigma2));
    return num - den;
}

double single_user_llr(double y, const ChannelParams& params, int user) {
    if (user != 1 && user != 2) throw config_error("single_user_llr: user must be 1 or 2");
    const auto& pt = params.superimposed;
    double num, den;
    if (user == 1) {
        num = logadd(log_gauss_exponent(y, pt[0], params.sigma2),
                     log_gauss_exponent(y, pt[1], params.sigma2));
        den = logadd(log_gauss_exponent(y, pt[2], params.sigma2),
                     log_gauss_exponent(y, pt[3], params.sigma2));
    } else {
        num = logadd(log_gauss_exponent(y, pt[0], params.sigma2),
                     log_gauss_exponent(y, pt[2], params.sigma2));
        den = logadd(log_gauss_exponent(y, pt[1], params.sigma2),
                     log_gauss_exponent(y, pt[3], params.sigma2));
    }
    return num - den;
}

} // namespace rdmac
