#include "rdmac/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <thread>

#include "rdmac/csvfmt.hpp"
#include "rdmac/errors.hpp"

namespace rdmac {

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::rdjd: return "rdjd";
        case Scheme::rdjd_noniter: return "rdjd-noniter";
        case Scheme::xorcd_2step: return "xorcd-2step";
        case Scheme::sic: return "sic";
        case Scheme::single_user_ref: return "single-user-ref";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    for (Scheme s : {Scheme::rdjd, Scheme::rdjd_noniter, Scheme::xorcd_2step, Scheme::sic,
                     Scheme::single_user_ref}) {
        if (scheme_name(s) == name) return s;
    }
    throw config_error("unknown scheme '" + name +
                       "' (want rdjd, rdjd-noniter, xorcd-2step, sic or single-user-ref)");
}

namespace {

constexpr long kChunk = 32;

struct BlockResult {
    long errs1 = 0;
    long errs2 = 0;
    int outer_iters = 0;
};

struct SchemeRunner {
    const Experiment& exp;
    const Encoder enc1;
    const Encoder enc2;

    explicit SchemeRunner(const Experiment& e)
        : exp(e), enc1(e.pair.h1), enc2(e.pair.h2) {}

    BlockResult run(const ChannelParams& params, std::uint64_t stream_seed) const {
        Rng rng(stream_seed);
        std::vector<std::uint8_t> u1(enc1.message_length());
        for (auto& b : u1) b = static_cast<std::uint8_t>(rng.bit());
        const auto c1 = enc1.encode_dense(u1);

        std::vector<std::uint8_t> u2(enc2.message_length());
        std::vector<std::uint8_t> c2(c1.size(), 0);
        if (exp.scheme != Scheme::single_user_ref) {
            for (auto& b : u2) b = static_cast<std::uint8_t>(rng.bit());
            c2 = enc2.encode_dense(u2);
        }
        const auto y = transmit(modulate(c1), modulate(c2), params, rng);

        BlockResult res;
        DecodeOutcome out;
        switch (exp.scheme) {
            case Scheme::rdjd:
                out = rdjd_decode(y, exp.pair, params, RdjdConfig{5, 30, true});
                break;
            case Scheme::rdjd_noniter:
                out = rdjd_decode(y, exp.pair, params, RdjdConfig{1, 150, true});
                break;
            case Scheme::xorcd_2step:
                out = xorcd_decode(y, exp.pair, params, 75);
                break;
            case Scheme::sic:
                out = sic_decode(y, exp.pair, params, 75);
                break;
            case Scheme::single_user_ref: {
                std::vector<double> llr(y.size());
                for (std::size_t i = 0; i < y.size(); ++i) {
                    llr[i] = 2.0 * params.h1 * y[i] / params.sigma2;
                }
                auto spa = binary_spa(exp.pair.h1, llr, 150);
                out.c1_hat = BinVector::from_dense(spa.hard);
                out.converged1 = spa.parity_ok;
                out.outer_iters_used = 1;
                break;
            }
        }
        res.outer_iters = out.outer_iters_used;

        const auto m1 = enc1.extract_message(out.c1_hat.to_dense());
        for (std::size_t i = 0; i < m1.size(); ++i) res.errs1 += m1[i] != u1[i];
        if (exp.scheme != Scheme::single_user_ref) {
            const auto m2 = enc2.extract_message(out.c2_hat.to_dense());
            for (std::size_t i = 0; i < m2.size(); ++i) res.errs2 += m2[i] != u2[i];
        }
        return res;
    }
};

std::uint64_t snr_key(double snr_db) { return std::bit_cast<std::uint64_t>(snr_db); }

} // namespace

std::vector<BerPoint> run_ber(const Experiment& exp,
                              const std::function<void(const BerPoint&)>& on_point) {
    if (exp.snr_grid_db.empty()) throw config_error("run_ber: empty snr grid");
    if (exp.max_blocks < 1) throw config_error("run_ber: max_blocks must be >= 1");

    const SchemeRunner runner(exp);
    const long k1 = runner.enc1.message_length();
    const long k2 = exp.scheme == Scheme::single_user_ref ? 0 : runner.enc2.message_length();
    const int workers = exp.workers > 0
                            ? exp.workers
                            : std::max(1u, std::thread::hardware_concurrency());

    std::vector<BerPoint> points;
    for (double snr_db : exp.snr_grid_db) {
        const ChannelParams params(exp.h1, exp.scheme == Scheme::single_user_ref ? 0.0 : exp.h2,
                                   snr_db_to_sigma2(snr_db));
        BerPoint pt;
        pt.snr_db = snr_db;
        long iters_sum = 0;

        std::vector<BlockResult> chunk(kChunk);
        for (long base = 0; base < exp.max_blocks; base += kChunk) {
            const long count = std::min(kChunk, exp.max_blocks - base);
            auto work = [&](int w) {
                for (long i = w; i < count; i += workers) {
                    chunk[i] = runner.run(
                        params, mix_seed(exp.master_seed, snr_key(snr_db), base + i));
                }
            };
            if (workers == 1 || count == 1) {
                work(0);
            } else {
                std::vector<std::thread> pool;
                pool.reserve(workers);
                for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
                for (auto& t : pool) t.join();
            }

            bool stop = false;
            for (long i = 0; i < count; ++i) {
                pt.blocks += 1;
                pt.errs1 += chunk[i].errs1;
                pt.errs2 += chunk[i].errs2;
                iters_sum += chunk[i].outer_iters;
                if (chunk[i].errs1 + chunk[i].errs2 > 0) pt.error_events += 1;
                if (pt.error_events >= exp.min_error_events) {
                    stop = true;
                    break;
                }
            }
            if (stop) break;
        }

        pt.ber1 = k1 > 0 ? static_cast<double>(pt.errs1) / (static_cast<double>(pt.blocks) * k1)
                         : 0.0;
        pt.ber2 = k2 > 0 ? static_cast<double>(pt.errs2) / (static_cast<double>(pt.blocks) * k2)
                         : 0.0;
        const long ktot = k1 + k2;
        pt.ber_avg = ktot > 0 ? static_cast<double>(pt.errs1 + pt.errs2) /
                                    (static_cast<double>(pt.blocks) * ktot)
                              : 0.0;
        pt.avg_outer_iters = pt.blocks > 0
                                 ? static_cast<double>(iters_sum) / static_cast<double>(pt.blocks)
                                 : 0.0;
        if (on_point) on_point(pt);
        points.push_back(std::move(pt));
    }
    return points;
}

bool rate_achieved(const Experiment& exp, double snr_db, long trials, double target_ber) {
    Experiment probe = exp;
    probe.snr_grid_db = {snr_db};
    probe.max_blocks = trials;
    probe.min_error_events = trials + 1; // never stop on error events
    const auto pts = run_ber(probe);
    return pts.front().ber_avg < target_ber;
}

void write_results(const Experiment& exp, std::span<const BerPoint> points,
                   const std::filesystem::path& file, bool append) {
    const bool write_header = !append || !std::filesystem::exists(file) ||
                              std::filesystem::file_size(file) == 0;
    std::ofstream out(file, append ? std::ios::app : std::ios::trunc);
    if (!out) throw config_error("cannot open for write: " + file.string());
    if (write_header) {
        out << "scheme,construction,L,R1,R2,h1,h2,snr_db,blocks,errs1,errs2,ber1,ber2,ber_avg,"
               "avg_outer_iters,seed\n";
    }
    const std::string prefix =
        scheme_name(exp.scheme) + "," +
        (exp.pair.construction == Construction::re ? "re" : "rc") + "," +
        std::to_string(exp.pair.block_length()) + "," + format_double(exp.pair.r1.value()) + "," +
        format_double(exp.pair.r2.value()) + "," + format_double(exp.h1) + "," +
        format_double(exp.h2) + ",";
    for (const auto& pt : points) {
        out << prefix << format_double(pt.snr_db) << ',' << pt.blocks << ',' << pt.errs1 << ','
            << pt.errs2 << ',' << format_double(pt.ber1) << ',' << format_double(pt.ber2) << ','
            << format_double(pt.ber_avg) << ',' << format_double(pt.avg_outer_iters) << ','
            << exp.master_seed << '\n';
    }
    if (!out) throw config_error("write failed: " + file.string());
}

double find_waterfall_snr(const Experiment& exp, const WaterfallSearch& search) {
    Experiment probe = exp;
    probe.max_blocks = search.max_blocks;
    probe.min_error_events = search.min_error_events;
    auto ber_at = [&](double snr) {
        probe.snr_grid_db = {snr};
        return run_ber(probe).front().ber_avg;
    };
    double lo = search.lo_db, hi = search.hi_db;
    double ber_lo = ber_at(lo), ber_hi = ber_at(hi);
    if (!(ber_lo > search.target_ber) || !(ber_hi < search.target_ber)) {
        throw tolerance_error("waterfall bracket does not straddle target: ber(" +
                              format_double(lo) + ")=" + format_double(ber_lo) + ", ber(" +
                              format_double(hi) + ")=" + format_double(ber_hi));
    }
    while (hi - lo > search.tol_db) {
        const double mid = 0.5 * (lo + hi);
        if (ber_at(mid) > search.target_ber) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

Experiment experiment_from_config(KeyValueConfig& cfg, const std::filesystem::path& base_dir) {
    Experiment exp;
    exp.scheme = scheme_from_name(cfg.get_string("scheme"));

    const std::filesystem::path pair_path = cfg.get_string("pair");
    std::filesystem::path resolved = pair_path;
    if (pair_path.is_relative() && std::filesystem::exists(base_dir / pair_path / "manifest.txt")) {
        resolved = base_dir / pair_path;
    }
    exp.pair = load_pair(resolved);

    exp.h1 = cfg.get_double("h1");
    exp.h2 = cfg.get_double("h2");
    if (exp.scheme == Scheme::single_user_ref && exp.h2 != 0.0) {
        throw config_error("single-user-ref runs with h2 = 0");
    }
    if (std::abs(exp.h1) < std::abs(exp.h2)) {
        throw config_error("config requires |h1| >= |h2|");
    }
    exp.snr_grid_db = cfg.get_double_list("snr_db");
    for (std::size_t i = 1; i < exp.snr_grid_db.size(); ++i) {
        if (!(exp.snr_grid_db[i] > exp.snr_grid_db[i - 1])) {
            throw config_error("snr_db grid must be strictly increasing");
        }
    }
    exp.max_blocks = cfg.get_long("max_blocks", 10000);
    exp.min_error_events = cfg.get_long("min_error_events", 100);
    if (cfg.has("master_seed")) exp.master_seed = cfg.get_u64("master_seed", 0);
    exp.workers = static_cast<int>(cfg.get_long("workers", 1));
    if (exp.max_blocks < 1 || exp.min_error_events < 1) {
        throw config_error("max_blocks and min_error_events must be >= 1");
    }
    return exp;
}

} // namespace rdmac
