#pragma once

#include <string>
#include <vector>

#include "rdmac/channel.hpp"
#include "rdmac/quadrature.hpp"

namespace rdmac {

struct RatePoint {
    double r1 = 0.0;
    double r2 = 0.0;
};

double gaussian_entropy_bits(double sigma2);

// Mutual information of BPSK at the given gain over an AWGN channel; equals
// the single-user capacity C(gain) under binary signaling.
double p2p_bpsk_mi(double gain, double sigma2, const Quadrature& quad = {});

// I(x1, x2; y): four-point superimposed constellation against noise.
double mi_joint(const ChannelParams& params, const Quadrature& quad = {});

// I(x_u; y | x_other): the other user known and cancelled.
double mi_conditional(const ChannelParams& params, int user, const Quadrature& quad = {});

// I(x_u; y): the other user treated as part of the noise.
double mi_single(const ChannelParams& params, int user, const Quadrature& quad = {});

// I(c; y) for the XOR bit c = b1 xor b2; the physical-layer network-coding
// quantity that bottlenecks XOR-first receivers.
double mi_nc(const ChannelParams& params, const Quadrature& quad = {});

// H(x1, x2 | y, c) by direct quadrature (ambiguity left inside each XOR
// class). Algebraically equals 1 + mi_nc - mi_joint.
double entropy_xx_given_yc(const ChannelParams& params, const Quadrature& quad = {});

// Pentagon vertices in order: (0,0), (C1,0), (C1, Csum-C1), (Csum-C2, C2),
// (0, C2).
std::vector<RatePoint> capacity_region(const ChannelParams& params, const Quadrature& quad = {});

// Achievable boxes of the XOR-decoding theorem.
struct Theorem1Region {
    RatePoint corner_a; // R1 < 1 - max{H(c|y), H(x1,x2|y,c)}, R2 < 1 - H(c|y)
    RatePoint corner_b; // roles of the users swapped
    double h_c_given_y = 0.0;
    double h_xx_given_yc = 0.0;
};

Theorem1Region theorem1_region(const ChannelParams& params, const Quadrature& quad = {});

struct CapacityRow {
    double snr_db = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
    std::string quantity;
    double value = 0.0;
};

// One row per (snr, quantity); quantities: c1, c2, mi_joint, mi_single_1,
// mi_single_2, mi_nc, h_c_given_y, h_xx_given_yc, thm1a_r1, thm1a_r2,
// thm1b_r1, thm1b_r2.
std::vector<CapacityRow> capacity_sweep(double h1, double h2, std::span<const double> snr_grid_db,
                                        const Quadrature& quad = {});

} // namespace rdmac
