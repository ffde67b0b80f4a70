#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "rdmac/channel.hpp"
#include "rdmac/codes.hpp"
#include "rdmac/config.hpp"
#include "rdmac/decoders.hpp"

namespace rdmac {

enum class Scheme { rdjd, rdjd_noniter, xorcd_2step, sic, single_user_ref };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

// All schemes run the same total inner-iteration budget (150): the iterative
// decoder as 5 x 30, the one-shot variant as 1 x 150, two-step baselines as
// 75 + 75.
struct Experiment {
    Scheme scheme = Scheme::rdjd;
    CodePair pair;
    double h1 = 1.0;
    double h2 = 1.0;
    std::vector<double> snr_grid_db;
    long max_blocks = 10000;
    long min_error_events = 100; // blocks with at least one bit error
    std::uint64_t master_seed = 0;
    int workers = 1; // worker count never changes results
};

struct BerPoint {
    double snr_db = 0.0;
    long blocks = 0;
    long errs1 = 0; // information-bit errors, user 1
    long errs2 = 0;
    double ber1 = 0.0;
    double ber2 = 0.0;
    double ber_avg = 0.0;
    double avg_outer_iters = 0.0;
    long error_events = 0;
};

// Monte Carlo sweep over the SNR grid. Each block draws its own random
// stream keyed by (master_seed, snr bits, block index); blocks are evaluated
// in fixed-size chunks and folded sequentially, so results are byte-stable
// across worker counts and a grid split concatenates to the full run.
std::vector<BerPoint> run_ber(const Experiment& exp,
                              const std::function<void(const BerPoint&)>& on_point = {});

// The operating-point test used for rate comparisons: pooled BER below
// target_ber over a fixed number of blocks.
bool rate_achieved(const Experiment& exp, double snr_db, long trials = 500,
                   double target_ber = 1e-5);

void write_results(const Experiment& exp, std::span<const BerPoint> points,
                   const std::filesystem::path& file, bool append = false);

struct WaterfallSearch {
    double lo_db = 0.0;
    double hi_db = 8.0;
    double tol_db = 0.1;
    double target_ber = 3e-4;
    long max_blocks = 400;
    long min_error_events = 40;
};

// Bisect the SNR at which pooled BER crosses target_ber. Requires the
// bracket to straddle the target.
double find_waterfall_snr(const Experiment& exp, const WaterfallSearch& search);

// Build an experiment from a config file; pair paths resolve against the
// config's directory first, then the working directory. The config must pin
// scheme, pair, h1, h2 and snr_db; master_seed may instead arrive via
// overrides (the command line).
Experiment experiment_from_config(KeyValueConfig& cfg, const std::filesystem::path& base_dir);

} // namespace rdmac
