// Command-line front end: code-pair construction, BER sweeps, transfer
// charts, information-theoretic sweeps and pair verification.
//
// Exit codes: 0 success, 1 usage/config problems, 2 construction or
// verification failures, 3 numerical tolerance failures.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rdmac/alist.hpp"
#include "rdmac/codes.hpp"
#include "rdmac/csvfmt.hpp"
#include "rdmac/errors.hpp"
#include "rdmac/exitchart.hpp"
#include "rdmac/harness.hpp"
#include "rdmac/infotheory.hpp"

namespace fs = std::filesystem;
using namespace rdmac;

namespace {

void apply_overrides(KeyValueConfig& cfg, const std::vector<std::string>& sets) {
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw config_error("--set expects KEY=VALUE, got '" + kv + "'");
        }
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
}

BinMatrix load_base(const std::string& base, int rows, int cols, int col_weight,
                    std::uint64_t seed) {
    if (base == "dsc273") return make_dsc273();
    if (base == "regular") {
        if (rows <= 0 || cols <= 0) {
            throw config_error("--base regular needs --rows and --cols");
        }
        return make_regular_ldpc(rows, cols, col_weight, seed);
    }
    return read_alist(base);
}

struct ConstructArgs {
    std::string type = "re";
    std::string base;
    int rows = 0, cols = 0, col_weight = 3;
    int extra_rows = 0, row_weight = 3;
    int rc_lambda = 2, rc_groups = 0;
    std::uint64_t seed = 1;
    std::string out;
    bool allow_base_cycles = false;
    bool dry_run = false;
};

int cmd_construct(const ConstructArgs& args) {
    if (args.type != "re" && args.type != "rc") throw config_error("--type must be re or rc");
    const BinMatrix base = load_base(args.base, args.rows, args.cols, args.col_weight, args.seed);
    CodePair pair;
    if (args.type == "re") {
        ReParams re{args.extra_rows, args.row_weight, args.seed};
        re.allow_base_cycles = args.allow_base_cycles;
        pair = extend_re(base, re);
    } else if (args.type == "rc") {
        const int n_groups = args.rc_groups;
        if (n_groups <= 0) throw config_error("--type rc needs --rc-groups > 0");
        const auto groups = propose_rc_groups(base, args.rc_lambda, n_groups, args.seed);
        pair = combine_rc(base, RcParams{args.rc_lambda, groups});
        pair.seed = args.seed;
    }

    std::cout << "construction = " << (args.type == "re" ? "re" : "rc") << '\n'
              << "block_length = " << pair.block_length() << '\n'
              << "r1 = " << pair.r1.str() << " (" << format_double(pair.r1.value()) << ")\n"
              << "r2 = " << pair.r2.str() << " (" << format_double(pair.r2.value()) << ")\n";
    if (args.dry_run) {
        std::cout << "dry run: nothing written\n";
        return 0;
    }
    save_pair(pair, args.out);
    std::cout << "wrote " << args.out << '\n';
    return 0;
}

struct RunArgs {
    std::string config;
    std::string out;
    std::vector<std::string> sets;
    std::string seed; // string so "absent" is distinguishable
    int workers = 0;
    bool append = false;
    bool dry_run = false;
};

int cmd_ber(const RunArgs& args) {
    KeyValueConfig cfg = KeyValueConfig::parse_file(args.config);
    apply_overrides(cfg, args.sets);
    if (!args.seed.empty()) cfg.set("master_seed", args.seed);
    if (args.workers > 0) cfg.set("workers", std::to_string(args.workers));
    if (!cfg.has("master_seed")) {
        throw config_error("a seed is required: pass --seed or set master_seed");
    }
    Experiment exp = experiment_from_config(cfg, fs::path(args.config).parent_path());
    cfg.finish();

    std::cout << "scheme = " << scheme_name(exp.scheme) << ", L = " << exp.pair.block_length()
              << ", R1 = " << exp.pair.r1.str() << ", R2 = " << exp.pair.r2.str()
              << ", h = (" << format_double(exp.h1) << ", " << format_double(exp.h2) << ")"
              << ", seed = " << exp.master_seed << '\n';
    if (args.dry_run) {
        std::cout << "dry run: " << exp.snr_grid_db.size() << " snr points, max_blocks = "
                  << exp.max_blocks << ", min_error_events = " << exp.min_error_events
                  << ", workers = " << exp.workers << '\n';
        return 0;
    }

    const auto points = run_ber(exp, [&](const BerPoint& pt) {
        std::cerr << "snr " << format_double(pt.snr_db) << " dB: blocks " << pt.blocks
                  << ", ber1 " << format_double(pt.ber1) << ", ber2 " << format_double(pt.ber2)
                  << ", avg_outer " << format_double(pt.avg_outer_iters) << '\n';
    });
    if (!args.out.empty()) {
        write_results(exp, points, args.out, args.append);
        std::cout << "wrote " << args.out << '\n';
    }
    return 0;
}

int cmd_exit(const RunArgs& args) {
    KeyValueConfig cfg = KeyValueConfig::parse_file(args.config);
    apply_overrides(cfg, args.sets);
    if (!args.seed.empty()) cfg.set("seed", args.seed);
    if (!cfg.has("seed")) throw config_error("a seed is required: pass --seed or set seed");

    const fs::path base_dir = fs::path(args.config).parent_path();
    fs::path pair_path = cfg.get_string("pair");
    if (pair_path.is_relative() && fs::exists(base_dir / pair_path / "manifest.txt")) {
        pair_path = base_dir / pair_path;
    }
    const CodePair pair = load_pair(pair_path);
    const double h1 = cfg.get_double("h1");
    const double h2 = cfg.get_double("h2");
    const double snr_db = cfg.get_double("snr_db");
    const auto ia_grid = cfg.get_double_list("ia_grid");
    ExitConfig ecfg;
    ecfg.trials = static_cast<int>(cfg.get_long("trials", 40));
    ecfg.inner_iters = static_cast<int>(cfg.get_long("inner_iters", 30));
    ecfg.seed = cfg.get_u64("seed", 1);
    cfg.finish();

    const ChannelParams params(h1, h2, snr_db_to_sigma2(snr_db));
    const auto [u1, u2] = transfer_jud(pair, params, ia_grid, ecfg);
    const auto rud = transfer_rud(pair, ia_grid, ecfg);
    const auto tunnel = tunnel_open(u2, rud);
    std::cout << "tunnel " << (tunnel.open ? "open" : "closed") << ", min gap "
              << format_double(tunnel.min_gap) << '\n';
    if (!args.out.empty()) {
        const ExitCurve curves[] = {u1, u2, rud};
        write_exit_csv(curves, args.out);
        std::cout << "wrote " << args.out << '\n';
    }
    return 0;
}

struct CapacityArgs {
    double h1 = 1.0, h2 = 1.0;
    std::string snr_list;
    std::string out;
};

int cmd_capacity(const CapacityArgs& args) {
    std::vector<double> grid;
    {
        std::string raw = args.snr_list;
        for (char& c : raw) {
            if (c == ',') c = ' ';
        }
        std::istringstream in(raw);
        std::string tok;
        while (in >> tok) grid.push_back(parse_double(tok));
    }
    if (grid.empty()) throw config_error("--snr needs at least one value");

    Quadrature quad;
    quad.cross_check = true;
    const auto rows = capacity_sweep(args.h1, args.h2, grid, quad);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!args.out.empty()) {
        file.open(args.out);
        if (!file) throw config_error("cannot open for write: " + args.out);
        os = &file;
    }
    *os << "snr_db,h1,h2,quantity,value\n";
    for (const auto& r : rows) {
        *os << format_double(r.snr_db) << ',' << format_double(r.h1) << ',' << format_double(r.h2)
            << ',' << r.quantity << ',' << format_double(r.value) << '\n';
    }
    if (!args.out.empty()) std::cout << "wrote " << args.out << '\n';
    return 0;
}

struct VerifyArgs {
    std::string pair;
    int trials = 200;
    std::uint64_t seed = 1;
};

int cmd_verify(const VerifyArgs& args) {
    const CodePair pair = load_pair(args.pair);
    const auto rep = verify_nested(pair, args.trials, args.seed);
    // Informational: dense-base extensions carry base cycles by necessity, so
    // this line does not affect the exit status.
    const bool clean = !has_four_cycle(pair.h2);
    std::cout << "pair " << args.pair << ": L = " << pair.block_length() << ", R1 = "
              << pair.r1.str() << ", R2 = " << pair.r2.str() << '\n'
              << "lower_in_common " << (rep.lower_in_common ? "ok" : "FAIL") << '\n'
              << "xor_in_common " << (rep.xor_in_common ? "ok" : "FAIL") << '\n'
              << "lower_in_appended " << (rep.lower_in_appended ? "ok" : "FAIL") << '\n'
              << "structure " << (rep.structure_ok ? "ok" : "FAIL") << '\n'
              << "four_cycle_free " << (clean ? "yes" : "no") << '\n';
    if (!rep.all_ok()) {
        if (!rep.detail.empty()) std::cout << "detail: " << rep.detail << '\n';
        throw construction_error("verification failed for " + args.pair);
    }
    std::cout << "verified with " << rep.trials << " random codeword trials\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rate-diverse two-user coding workbench"};
    app.require_subcommand(1);

    ConstructArgs cons;
    auto* c = app.add_subcommand("construct", "build and save a nested code pair");
    c->add_option("--type", cons.type, "re or rc")->required();
    c->add_option("--base", cons.base, "alist file, 'dsc273' or 'regular'")->required();
    c->add_option("--rows", cons.rows, "rows for --base regular");
    c->add_option("--cols", cons.cols, "columns for --base regular");
    c->add_option("--col-weight", cons.col_weight, "column weight for --base regular");
    c->add_option("--extra-rows", cons.extra_rows, "appended rows (re)");
    c->add_option("--row-weight", cons.row_weight, "weight of appended rows (re)");
    c->add_flag("--allow-base-cycles", cons.allow_base_cycles,
                "keep appended rows four-cycle-free only among themselves (re)");
    c->add_option("--rc-lambda", cons.rc_lambda, "rows combined per group (rc)");
    c->add_option("--rc-groups", cons.rc_groups, "number of combined groups (rc)");
    c->add_option("--seed", cons.seed, "construction seed")->required();
    c->add_option("--out", cons.out, "output pair directory");
    c->add_flag("--dry-run", cons.dry_run, "report rates without writing");

    RunArgs ber;
    auto* b = app.add_subcommand("ber", "Monte Carlo bit-error-rate sweep");
    b->add_option("--config", ber.config, "experiment config file")->required();
    b->add_option("--out", ber.out, "results CSV path");
    b->add_option("--seed", ber.seed, "master seed (overrides config)");
    b->add_option("--workers", ber.workers, "worker threads (results unaffected)");
    b->add_option("--set", ber.sets, "override config KEY=VALUE")->take_all();
    b->add_flag("--append", ber.append, "append to an existing CSV");
    b->add_flag("--dry-run", ber.dry_run, "validate and summarize without running");

    RunArgs exitc;
    auto* e = app.add_subcommand("exit", "decoder transfer curves and tunnel check");
    e->add_option("--config", exitc.config, "chart config file")->required();
    e->add_option("--out", exitc.out, "curves CSV path");
    e->add_option("--seed", exitc.seed, "seed (overrides config)");
    e->add_option("--set", exitc.sets, "override config KEY=VALUE")->take_all();

    CapacityArgs cap;
    auto* k = app.add_subcommand("capacity", "information-theoretic sweep");
    k->add_option("--h1", cap.h1, "user-1 gain")->required();
    k->add_option("--h2", cap.h2, "user-2 gain")->required();
    k->add_option("--snr", cap.snr_list, "comma-separated SNR grid in dB")->required();
    k->add_option("--out", cap.out, "CSV path (default stdout)");

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "check a stored pair's nesting identities");
    v->add_option("--pair", ver.pair, "pair directory")->required();
    v->add_option("--trials", ver.trials, "random codeword trials");
    v->add_option("--seed", ver.seed, "trial seed");

    try {
        app.parse(argc, argv);
        if (c->parsed()) return cmd_construct(cons);
        if (b->parsed()) return cmd_ber(ber);
        if (e->parsed()) return cmd_exit(exitc);
        if (k->parsed()) return cmd_capacity(cap);
        if (v->parsed()) return cmd_verify(ver);
        return 1;
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? 0 : 1;
    } catch (const tolerance_error& err) {
        std::cerr << "tolerance error: " << err.what() << '\n';
        return 3;
    } catch (const construction_error& err) {
        std::cerr << "construction error: " << err.what() << '\n';
        return 2;
    } catch (const parse_error& err) {
        std::cerr << "parse error: " << err.what() << '\n';
        return 1;
    } catch (const config_error& err) {
        std::cerr << "config error: " << err.what() << '\n';
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }
}
