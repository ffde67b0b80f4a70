#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "rdmac/channel.hpp"
#include "rdmac/codes.hpp"
#include "rdmac/decoders.hpp"
#include "rdmac/rng.hpp"

namespace rdmac {

// Mutual information carried by a consistent Gaussian LLR N(+/- sigma^2/2,
// sigma^2); evaluated by numerical integration.
double j_function(double sigma_a);

// Inverse of j_function by bisection; input clamped to [0, 1).
double j_inverse(double i);

// Synthetic a-priori LLRs at information content i_a for the given bits
// (positive mean for bit 0).
std::vector<double> gen_apriori(std::span<const std::uint8_t> bits, double i_a, Rng& rng);

// Sample estimate I = 1 - mean log2(1 + exp(-sign * llr)).
double measure_mi(std::span<const double> llrs, std::span<const std::uint8_t> bits);

// Histogram variant kept for cross-validation of the estimator.
double measure_mi_histogram(std::span<const double> llrs, std::span<const std::uint8_t> bits,
                            int bins = 64);

struct ExitPoint {
    double i_a = 0.0;
    double i_e = 0.0;
};

struct ExitCurve {
    std::string decoder; // "jud" or "rud"
    int user = 0;        // 1 or 2; rud curves always describe user 2
    double snr_db = 0.0;
    double h1 = 0.0, h2 = 0.0;
    double r1 = 0.0, r2 = 0.0;
    std::vector<ExitPoint> points;
};

struct ExitConfig {
    int trials = 40;      // codeword/noise realizations pooled per grid point
    int inner_iters = 30; // sum-product iterations per activation
    std::uint64_t seed = 1;
};

// Transfer of one joint-decoder activation against user-2 a-priori knowledge.
// Returns the user-1 curve (full posterior) and the user-2 curve (extrinsic).
std::pair<ExitCurve, ExitCurve> transfer_jud(const CodePair& pair, const ChannelParams& params,
                                             std::span<const double> ia_grid,
                                             const ExitConfig& cfg);

// Transfer of the residual decoder on the appended matrix (channel-free).
ExitCurve transfer_rud(const CodePair& pair, std::span<const double> ia_grid,
                       const ExitConfig& cfg);

struct TunnelReport {
    bool open = false;
    double min_gap = 0.0; // smallest vertical clearance on the common domain
};

// Decision tunnel between the joint decoder's user-2 curve and the residual
// curve drawn with swapped axes (linear interpolation of the inverse).
TunnelReport tunnel_open(const ExitCurve& jud_user2, const ExitCurve& rud);

void write_exit_csv(std::span<const ExitCurve> curves, const std::filesystem::path& file);

} // namespace rdmac
