#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rdmac/channel.hpp"
#include "rdmac/codes.hpp"

namespace rdmac {

using BitPMF = std::array<double, 2>;

// Componentwise product of two joint-symbol PMFs, renormalized. An all-zero
// product counts as a contradiction: the result falls back to uniform and
// *contradictions is incremented when given.
JointPMF var_combine(const JointPMF& a, const JointPMF& b, long* contradictions = nullptr);

// XOR convolution over Z2 x Z2: out[o] = sum_m a[m] * b[m ^ o]. This is the
// check-node rule for joint symbols; each user's plane obeys its own binary
// parity.
JointPMF chk_combine(const JointPMF& a, const JointPMF& b);

struct JudResult {
    std::vector<JointPMF> w;   // posterior per position
    BinVector c1_hat, c2_hat;  // argmax decisions, ties toward the smaller symbol
    bool parity_ok = false;    // both decision planes satisfy hc
    int iters_used = 0;
    long contradictions = 0;
};

// Sum-product decoding over the joint-symbol alphabet on the common matrix.
// p_ch are channel posteriors, e_prior is per-position user-2 side evidence
// (same length as p_ch; pass uniform entries for none). With early_stop the
// loop exits once both decision planes satisfy hc.
JudResult jud_decode(const std::vector<JointPMF>& p_ch, const std::vector<BitPMF>& e_prior,
                     const BinMatrix& hc, int iters, bool early_stop = true);

// User-2 evidence extracted from joint posteriors: a[i] = {w0 + w2, w1 + w3}.
std::vector<BitPMF> marginalize_user2(const std::vector<JointPMF>& w);

// Binary sum-product over h in the LLR domain (tanh rule), messages clamped
// to +/-50. posterior_llr = intrinsic + sum of incoming check messages.
struct BinarySpaResult {
    std::vector<double> posterior_llr;
    std::vector<std::uint8_t> hard;
    bool parity_ok = false;
    int iters_used = 0;
};

BinarySpaResult binary_spa(const BinMatrix& h, std::span<const double> intrinsic_llr, int iters,
                           bool early_stop = true);

// Residual decoding on the appended matrix: prior PMFs in, extrinsic PMFs out
// (posterior minus prior in the LLR domain, clamped to +/-50).
std::vector<BitPMF> rud_decode(const std::vector<BitPMF>& a, const BinMatrix& ha, int iters);

struct RdjdConfig {
    int outer_iters = 5;  // joint/residual exchange rounds
    int inner_iters = 30; // sum-product iterations per activation
    bool early_stop = true;
    bool operator==(const RdjdConfig&) const = default;
};

struct DecodeOutcome {
    BinVector c1_hat, c2_hat;
    bool converged1 = false; // c1_hat satisfies h1
    bool converged2 = false; // c2_hat satisfies h2
    int outer_iters_used = 0;
    long contradictions = 0;
    // Information-bit errors against the transmitted truth; -1 until the
    // harness fills them in.
    long bit_errors_user1 = -1;
    long bit_errors_user2 = -1;
};

// Iterative joint/residual decoding. Each round runs the joint decoder with
// the current user-2 feedback, decides both planes from the joint posterior,
// then refreshes the feedback through the residual decoder. With one round
// and no feedback this reduces to jud_decode alone.
DecodeOutcome rdjd_decode(std::span<const double> y, const CodePair& pair,
                          const ChannelParams& params, const RdjdConfig& cfg);

// Two-step baseline: decode the XOR plane over the common matrix from
// noncoherent LLRs, then user 1 over h1 with the XOR plane as side
// information; c2_hat inherits c1_hat's errors through the XOR.
DecodeOutcome xorcd_decode(std::span<const double> y, const CodePair& pair,
                           const ChannelParams& params, int iters_per_step);

// Successive interference cancellation, stronger user first: decode user 1
// with the exact marginal LLR, subtract h1 * x1_hat, then decode user 2.
DecodeOutcome sic_decode(std::span<const double> y, const CodePair& pair,
                         const ChannelParams& params, int iters_per_user);

} // namespace rdmac
