#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rdmac/binmat.hpp"
#include "rdmac/rng.hpp"

namespace rdmac {

// Joint symbol index o = 2*b1 + b2 where b1/b2 are the code bits of user 1/2.
inline int joint_bit1(int o) { return (o >> 1) & 1; }
inline int joint_bit2(int o) { return o & 1; }
inline int joint_symbol(int b1, int b2) { return 2 * b1 + b2; }

// PMF over the four joint symbols.
struct JointPMF {
    std::array<double, 4> p{0.25, 0.25, 0.25, 0.25};

    double& operator[](int o) { return p[o]; }
    double operator[](int o) const { return p[o]; }
    double sum() const { return p[0] + p[1] + p[2] + p[3]; }

    // Scale to unit sum; returns false (and resets to uniform) when all mass
    // vanished, which callers count as a contradiction.
    bool normalize();

    bool operator==(const JointPMF&) const = default;
};

// Real-valued two-user adder channel y = h1 x1 + h2 x2 + z, z ~ N(0, sigma2),
// with BPSK mapping bit 0 -> +1, bit 1 -> -1 and |h1| >= |h2| > 0 unless user
// 2 is silenced (h2 == 0).
struct ChannelParams {
    double h1 = 1.0;
    double h2 = 1.0;
    double sigma2 = 1.0;
    std::array<double, 4> superimposed{}; // h1 s(b1) + h2 s(b2) indexed by o

    ChannelParams(double h1_in, double h2_in, double sigma2_in);
};

// SNR defined against unit per-user symbol energy: SNR_dB = 10 log10(1/(2 sigma2)).
double snr_db_to_sigma2(double snr_db);
double sigma2_to_snr_db(double sigma2);

inline double bpsk(int bit) { return bit ? -1.0 : 1.0; }

std::vector<double> modulate(std::span<const std::uint8_t> bits);
std::vector<double> modulate(const BinVector& c);

// y_i = h1 x1_i + h2 x2_i + sigma * z_i
std::vector<double> transmit(std::span<const double> x1, std::span<const double> x2,
                             const ChannelParams& params, Rng& rng);

// Posterior over joint symbols given y, uniform prior (likelihood normalized
// to unit sum).
JointPMF joint_channel_probs(double y, const ChannelParams& params);

// log P(c = 0 | y) / P(c = 1 | y) for the XOR bit c = b1 xor b2.
double nc_llr(double y, const ChannelParams& params);

// Exact single-user LLR treating the other user as part of the channel
// (marginalized, not Gaussian-approximated). user is 1 or 2.
double single_user_llr(double y, const ChannelParams& params, int user);

} // namespace rdmac
