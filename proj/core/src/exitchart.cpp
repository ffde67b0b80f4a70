#include "rdmac/exitchart.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "rdmac/errors.hpp"
#include "rdmac/quadrature.hpp"

namespace rdmac {

namespace {

// log2(1 + e^{-x}) without overflow.
double log2_1p_exp_neg(double x) {
    if (x >= 0.0) return std::log1p(std::exp(-x)) / M_LN2;
    return (-x + std::log1p(std::exp(x))) / M_LN2;
}

double clamp50(double v) { return std::clamp(v, -50.0, 50.0); }

double llr_of_pmf(const BitPMF& p) {
    return clamp50(std::log(std::max(p[0], 1e-300)) - std::log(std::max(p[1], 1e-300)));
}

} // namespace

double j_function(double sigma_a) {
    if (sigma_a <= 0.0) return 0.0;
    const double sigma2 = sigma_a * sigma_a;
    Quadrature quad;
    const double loss =
        gaussian_expectation([](double xi) { return log2_1p_exp_neg(xi); }, 0.5 * sigma2, sigma2,
                             quad);
    return std::clamp(1.0 - loss, 0.0, 1.0);
}

double j_inverse(double i) {
    i = std::clamp(i, 0.0, 1.0 - 1e-12);
    if (i == 0.0) return 0.0;
    double lo = 0.0, hi = 100.0;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (j_function(mid) < i) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> gen_apriori(std::span<const std::uint8_t> bits, double i_a, Rng& rng) {
    const double sigma = j_inverse(i_a);
    const double mean = 0.5 * sigma * sigma;
    std::vector<double> llr(bits.size());
    for (std::size_t k = 0; k < bits.size(); ++k) {
        const double s = bits[k] ? -1.0 : 1.0;
        llr[k] = s * mean + sigma * rng.gaussian();
    }
    return llr;
}

double measure_mi(std::span<const double> llrs, std::span<const std::uint8_t> bits) {
    if (llrs.size() != bits.size() || llrs.empty()) {
        throw dimension_error("measure_mi: llr/bit length mismatch");
    }
    double loss = 0.0;
    for (std::size_t k = 0; k < llrs.size(); ++k) {
        loss += log2_1p_exp_neg(bits[k] ? -llrs[k] : llrs[k]);
    }
    return 1.0 - loss / static_cast<double>(llrs.size());
}

double measure_mi_histogram(std::span<const double> llrs, std::span<const std::uint8_t> bits,
                            int bins) {
    if (llrs.size() != bits.size() || llrs.empty()) {
        throw dimension_error("measure_mi_histogram: llr/bit length mismatch");
    }
    if (bins < 2) throw config_error("measure_mi_histogram: need at least 2 bins");
    double lo = *std::min_element(llrs.begin(), llrs.end());
    double hi = *std::max_element(llrs.begin(), llrs.end());
    if (lo == hi) {
        hi = lo + 1.0;
        lo -= 1.0;
    }
    std::vector<std::array<double, 2>> count(bins, {0.0, 0.0});
    std::array<double, 2> total{0.0, 0.0};
    for (std::size_t k = 0; k < llrs.size(); ++k) {
        int b = static_cast<int>((llrs[k] - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        count[b][bits[k]] += 1.0;
        total[bits[k]] += 1.0;
    }
    if (total[0] == 0.0 || total[1] == 0.0) {
        // Single-class sample carries no measurable information.
        return 0.0;
    }
    double mi = 0.0;
    for (const auto& c : count) {
        const double p0 = c[0] / total[0], p1 = c[1] / total[1];
        const double mix = 0.5 * (p0 + p1);
        if (p0 > 0.0) mi += 0.5 * p0 * std::log2(p0 / mix);
        if (p1 > 0.0) mi += 0.5 * p1 * std::log2(p1 / mix);
    }
    return mi;
}

namespace {

void stamp(ExitCurve& curve, const CodePair& pair) {
    curve.r1 = pair.r1.value();
    curve.r2 = pair.r2.value();
}

} // namespace

std::pair<ExitCurve, ExitCurve> transfer_jud(const CodePair& pair, const ChannelParams& params,
                                             std::span<const double> ia_grid,
                                             const ExitConfig& cfg) {
    ExitCurve u1{"jud", 1, sigma2_to_snr_db(params.sigma2), params.h1, params.h2, 0, 0, {}};
    ExitCurve u2{"jud", 2, sigma2_to_snr_db(params.sigma2), params.h1, params.h2, 0, 0, {}};
    stamp(u1, pair);
    stamp(u2, pair);

    Encoder enc1(pair.h1);
    Encoder enc2(pair.h2);
    const int n = pair.block_length();

    for (std::size_t gi = 0; gi < ia_grid.size(); ++gi) {
        const double ia = ia_grid[gi];
        std::vector<double> pool1, pool2;
        std::vector<std::uint8_t> bits1, bits2;
        pool1.reserve(static_cast<std::size_t>(cfg.trials) * n);
        pool2.reserve(static_cast<std::size_t>(cfg.trials) * n);
        for (int t = 0; t < cfg.trials; ++t) {
            Rng rng(mix_seed(cfg.seed, 0x6a756431 + gi, t));
            std::vector<std::uint8_t> u1bits(enc1.message_length());
            for (auto& b : u1bits) b = static_cast<std::uint8_t>(rng.bit());
            std::vector<std::uint8_t> u2bits(enc2.message_length());
            for (auto& b : u2bits) b = static_cast<std::uint8_t>(rng.bit());
            const auto c1 = enc1.encode_dense(u1bits);
            const auto c2 = enc2.encode_dense(u2bits);
            const auto y = transmit(modulate(c1), modulate(c2), params, rng);

            const auto prior_llr = gen_apriori(c2, ia, rng);
            std::vector<JointPMF> p_ch(n);
            std::vector<BitPMF> e_prior(n);
            for (int i = 0; i < n; ++i) {
                p_ch[i] = joint_channel_probs(y[i], params);
                const double e0 = 1.0 / (1.0 + std::exp(-prior_llr[i]));
                e_prior[i] = {e0, 1.0 - e0};
            }
            const auto res = jud_decode(p_ch, e_prior, pair.hc, cfg.inner_iters, false);
            for (int i = 0; i < n; ++i) {
                const auto& w = res.w[i];
                // User 1: full posterior; user 2: posterior minus prior.
                const double l1 = clamp50(std::log(std::max(w[0] + w[1], 1e-300)) -
                                          std::log(std::max(w[2] + w[3], 1e-300)));
                const double post2 = std::log(std::max(w[0] + w[2], 1e-300)) -
                                     std::log(std::max(w[1] + w[3], 1e-300));
                pool1.push_back(l1);
                pool2.push_back(clamp50(post2 - prior_llr[i]));
                bits1.push_back(c1[i]);
                bits2.push_back(c2[i]);
            }
        }
        u1.points.push_back(ExitPoint{ia, measure_mi(pool1, bits1)});
        u2.points.push_back(ExitPoint{ia, measure_mi(pool2, bits2)});
    }
    return {u1, u2};
}

ExitCurve transfer_rud(const CodePair& pair, std::span<const double> ia_grid,
                       const ExitConfig& cfg) {
    ExitCurve curve{"rud", 2, 0.0, 0.0, 0.0, 0, 0, {}};
    stamp(curve, pair);

    Encoder enc2(pair.h2);
    const int n = pair.block_length();
    for (std::size_t gi = 0; gi < ia_grid.size(); ++gi) {
        const double ia = ia_grid[gi];
        std::vector<double> pool;
        std::vector<std::uint8_t> bits;
        for (int t = 0; t < cfg.trials; ++t) {
            Rng rng(mix_seed(cfg.seed, 0x72756431 + gi, t));
            std::vector<std::uint8_t> u2bits(enc2.message_length());
            for (auto& b : u2bits) b = static_cast<std::uint8_t>(rng.bit());
            const auto c2 = enc2.encode_dense(u2bits);
            const auto prior_llr = gen_apriori(c2, ia, rng);
            std::vector<BitPMF> a(n);
            for (int i = 0; i < n; ++i) {
                const double a0 = 1.0 / (1.0 + std::exp(-prior_llr[i]));
                a[i] = {a0, 1.0 - a0};
            }
            const auto e = rud_decode(a, pair.ha, cfg.inner_iters);
            for (int i = 0; i < n; ++i) {
                pool.push_back(llr_of_pmf(e[i]));
                bits.push_back(c2[i]);
            }
        }
        curve.points.push_back(ExitPoint{ia, measure_mi(pool, bits)});
    }
    return curve;
}

TunnelReport tunnel_open(const ExitCurve& jud_user2, const ExitCurve& rud) {
    if (jud_user2.points.empty() || rud.points.empty()) {
        throw dimension_error("tunnel_open: empty curve");
    }
    // Residual curve swapped: at horizontal position x = I_RE the residual
    // decoder needs prior I_RA = inv(x); linear interpolation, 0 below range.
    std::vector<ExitPoint> inv(rud.points.size());
    for (std::size_t k = 0; k < rud.points.size(); ++k) {
        inv[k] = ExitPoint{rud.points[k].i_e, rud.points[k].i_a};
    }
    std::sort(inv.begin(), inv.end(),
              [](const ExitPoint& a, const ExitPoint& b) { return a.i_a < b.i_a; });
    const double max_reach = inv.back().i_a;

    auto inverse_at = [&](double x) {
        if (x <= inv.front().i_a) return 0.0;
        for (std::size_t k = 1; k < inv.size(); ++k) {
            if (x <= inv[k].i_a) {
                const double x0 = inv[k - 1].i_a, x1 = inv[k].i_a;
                const double y0 = inv[k - 1].i_e, y1 = inv[k].i_e;
                if (x1 == x0) return std::max(y0, y1);
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            }
        }
        return inv.back().i_e;
    };

    TunnelReport rep;
    rep.min_gap = INFINITY;
    for (const auto& p : jud_user2.points) {
        if (p.i_a > max_reach + 1e-12) continue; // beyond what the residual can supply
        rep.min_gap = std::min(rep.min_gap, p.i_e - inverse_at(p.i_a));
    }
    if (!std::isfinite(rep.min_gap)) rep.min_gap = 0.0;
    rep.open = rep.min_gap > 0.0;
    return rep;
}

void write_exit_csv(std::span<const ExitCurve> curves, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw config_error("cannot open for write: " + file.string());
    out << "decoder,user,snr_db,h1,h2,R1,R2,I_A,I_E\n";
    out.precision(17);
    for (const auto& c : curves) {
        for (const auto& p : c.points) {
            out << c.decoder << ',' << c.user << ',' << c.snr_db << ',' << c.h1 << ',' << c.h2
                << ',' << c.r1 << ',' << c.r2 << ',' << p.i_a << ',' << p.i_e << '\n';
        }
    }
    if (!out) throw config_error("write failed: " + file.string());
}

} // namespace rdmac
