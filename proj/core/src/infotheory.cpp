#include "rdmac/infotheory.hpp"

#include <array>
#include <cmath>

#include "rdmac/errors.hpp"

namespace rdmac {

namespace {

double two_point_entropy(double offset, double sigma2, const Quadrature& quad) {
    const std::array<double, 2> means{offset, -offset};
    const std::array<double, 2> weights{0.5, 0.5};
    return mixture_entropy_bits(means, weights, sigma2, quad);
}

// Binary entropy of p in bits.
double h2_bits(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

} // namespace

double gaussian_entropy_bits(double sigma2) {
    if (!(sigma2 > 0.0)) throw config_error("gaussian_entropy_bits: sigma2 must be positive");
    return 0.5 * std::log2(2.0 * M_PI * M_E * sigma2);
}

double p2p_bpsk_mi(double gain, double sigma2, const Quadrature& quad) {
    if (gain == 0.0) return 0.0;
    return two_point_entropy(std::abs(gain), sigma2, quad) - gaussian_entropy_bits(sigma2);
}

double mi_joint(const ChannelParams& params, const Quadrature& quad) {
    const std::array<double, 4> weights{0.25, 0.25, 0.25, 0.25};
    return mixture_entropy_bits(params.superimposed, weights, params.sigma2, quad) -
           gaussian_entropy_bits(params.sigma2);
}

double mi_conditional(const ChannelParams& params, int user, const Quadrature& quad) {
    if (user != 1 && user != 2) throw config_error("mi_conditional: user must be 1 or 2");
    return p2p_bpsk_mi(user == 1 ? params.h1 : params.h2, params.sigma2, quad);
}

double mi_single(const ChannelParams& params, int user, const Quadrature& quad) {
    if (user != 1 && user != 2) throw config_error("mi_single: user must be 1 or 2");
    const std::array<double, 4> weights{0.25, 0.25, 0.25, 0.25};
    const double hy = mixture_entropy_bits(params.superimposed, weights, params.sigma2, quad);
    // Conditioning on one user's symbol leaves a two-point mixture whose
    // separation is set by the other user's gain.
    const double other = user == 1 ? params.h2 : params.h1;
    return hy - two_point_entropy(std::abs(other), params.sigma2, quad);
}

double mi_nc(const ChannelParams& params, const Quadrature& quad) {
    const std::array<double, 4> weights{0.25, 0.25, 0.25, 0.25};
    const double hy = mixture_entropy_bits(params.superimposed, weights, params.sigma2, quad);
    // Class c=0 occupies +/-(h1+h2), class c=1 occupies +/-(h1-h2).
    const double h_c0 = two_point_entropy(std::abs(params.h1 + params.h2), params.sigma2, quad);
    const double h_c1 = two_point_entropy(std::abs(params.h1 - params.h2), params.sigma2, quad);
    return hy - 0.5 * (h_c0 + h_c1);
}

double entropy_xx_given_yc(const ChannelParams& params, const Quadrature& quad) {
    // Within XOR class c the symbol pair is one of two points; average the
    // binary entropy of the posterior over the class-conditional output.
    double total = 0.0;
    for (int c = 0; c < 2; ++c) {
        const double m0 = params.superimposed[c == 0 ? 0 : 1]; // (b1,b2) = (0,c)
        const double m1 = params.superimposed[c == 0 ? 3 : 2]; // (b1,b2) = (1,1^c)
        auto post_entropy = [&](double y) {
            const double e0 = -(y - m0) * (y - m0) / (2.0 * params.sigma2);
            const double e1 = -(y - m1) * (y - m1) / (2.0 * params.sigma2);
            const double emax = std::max(e0, e1);
            const double w0 = std::exp(e0 - emax), w1 = std::exp(e1 - emax);
            return h2_bits(w0 / (w0 + w1));
        };
        total += 0.25 * (gaussian_expectation(post_entropy, m0, params.sigma2, quad) +
                         gaussian_expectation(post_entropy, m1, params.sigma2, quad));
    }
    return total;
}

std::vector<RatePoint> capacity_region(const ChannelParams& params, const Quadrature& quad) {
    const double c1 = mi_conditional(params, 1, quad);
    const double c2 = mi_conditional(params, 2, quad);
    const double csum = std::min(mi_joint(params, quad), c1 + c2);
    return {
        RatePoint{0.0, 0.0},
        RatePoint{c1, 0.0},
        RatePoint{c1, std::max(csum - c1, 0.0)},
        RatePoint{std::max(csum - c2, 0.0), c2},
        RatePoint{0.0, c2},
    };
}

Theorem1Region theorem1_region(const ChannelParams& params, const Quadrature& quad) {
    Theorem1Region region;
    region.h_c_given_y = 1.0 - mi_nc(params, quad);
    region.h_xx_given_yc = entropy_xx_given_yc(params, quad);
    const double loose = 1.0 - region.h_c_given_y; // equals mi_nc
    const double tight = 1.0 - std::max(region.h_c_given_y, region.h_xx_given_yc);
    region.corner_a = RatePoint{tight, loose};
    region.corner_b = RatePoint{loose, tight};
    return region;
}

std::vector<CapacityRow> capacity_sweep(double h1, double h2, std::span<const double> snr_grid_db,
                                        const Quadrature& quad) {
    std::vector<CapacityRow> rows;
    rows.reserve(snr_grid_db.size() * 12);
    for (double snr : snr_grid_db) {
        const ChannelParams params(h1, h2, snr_db_to_sigma2(snr));
        const auto thm = theorem1_region(params, quad);
        const std::pair<std::string, double> quantities[] = {
            {"c1", mi_conditional(params, 1, quad)},
            {"c2", mi_conditional(params, 2, quad)},
            {"mi_joint", mi_joint(params, quad)},
            {"mi_single_1", mi_single(params, 1, quad)},
            {"mi_single_2", mi_single(params, 2, quad)},
            {"mi_nc", mi_nc(params, quad)},
            {"h_c_given_y", thm.h_c_given_y},
            {"h_xx_given_yc", thm.h_xx_given_yc},
            {"thm1a_r1", thm.corner_a.r1},
            {"thm1a_r2", thm.corner_a.r2},
            {"thm1b_r1", thm.corner_b.r1},
            {"thm1b_r2", thm.corner_b.r2},
        };
        for (const auto& [name, value] : quantities) {
            rows.push_back(CapacityRow{snr, h1, h2, name, value});
        }
    }
    return rows;
}

} // namespace rdmac
