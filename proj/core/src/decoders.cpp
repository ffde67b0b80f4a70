#include "rdmac/decoders.hpp"

#include <algorithm>
#include <cmath>

#include "rdmac/errors.hpp"

namespace rdmac {

namespace {

constexpr double kLlrClamp = 50.0;

double clamp_llr(double v) { return std::clamp(v, -kLlrClamp, kLlrClamp); }

// Walsh transform over Z2 x Z2; self-inverse up to the factor 4. XOR
// convolution of PMFs is a componentwise product in this domain.
std::array<double, 4> wht(const JointPMF& q) {
    const double a = q[0] + q[1], b = q[0] - q[1];
    const double c = q[2] + q[3], d = q[2] - q[3];
    return {a + c, b + d, a - c, b - d};
}

JointPMF iwht_pmf(const std::array<double, 4>& s) {
    const double a = s[0] + s[1], b = s[0] - s[1];
    const double c = s[2] + s[3], d = s[2] - s[3];
    JointPMF out;
    out[0] = a + c;
    out[1] = b + d;
    out[2] = a - c;
    out[3] = b - d;
    // Exact values are nonnegative multiples of 1/4; roundoff may dip below 0.
    for (int o = 0; o < 4; ++o) out[o] = std::max(out[o] * 0.25, 0.0);
    return out;
}

struct Graph {
    int n_vars = 0;
    int n_checks = 0;
    std::vector<int> chk_ptr, chk_var; // check -> edge range; edge -> variable
    std::vector<int> var_ptr, var_edge;

    explicit Graph(const BinMatrix& h) : n_vars(h.n_cols()), n_checks(h.n_rows()) {
        chk_ptr.assign(n_checks + 1, 0);
        for (int m = 0; m < n_checks; ++m) {
            chk_ptr[m + 1] = chk_ptr[m] + static_cast<int>(h.row(m).size());
        }
        chk_var.reserve(chk_ptr[n_checks]);
        for (int m = 0; m < n_checks; ++m) {
            for (int v : h.row(m)) chk_var.push_back(v);
        }
        var_ptr.assign(n_vars + 1, 0);
        for (int v : chk_var) ++var_ptr[v + 1];
        for (int v = 0; v < n_vars; ++v) var_ptr[v + 1] += var_ptr[v];
        var_edge.resize(chk_var.size());
        std::vector<int> fill(var_ptr.begin(), var_ptr.end() - 1);
        for (int e = 0; e < static_cast<int>(chk_var.size()); ++e) {
            var_edge[fill[chk_var[e]]++] = e;
        }
    }

    int n_edges() const { return static_cast<int>(chk_var.size()); }
};

int argmax_symbol(const JointPMF& w) {
    int best = 0;
    for (int o = 1; o < 4; ++o) {
        if (w[o] > w[best]) best = o;
    }
    return best;
}

// One full joint sum-product pass over a prebuilt graph; reusable workspace.
struct JudWorkspace {
    std::vector<JointPMF> v2c, c2v, prior, posterior;
    std::vector<std::array<double, 4>> fwd;
    std::vector<JointPMF> fwd_var;
    std::vector<std::uint8_t> plane1, plane2;
};

JudResult jud_run(const Graph& g, const BinMatrix& hc, const std::vector<JointPMF>& prior,
                  int iters, bool early_stop, JudWorkspace& ws) {
    JudResult res;
    ws.posterior = prior;
    ws.v2c.assign(g.n_edges(), JointPMF{});
    ws.c2v.assign(g.n_edges(), JointPMF{{1.0, 1.0, 1.0, 1.0}});
    for (int v = 0; v < g.n_vars; ++v) {
        for (int k = g.var_ptr[v]; k < g.var_ptr[v + 1]; ++k) ws.v2c[g.var_edge[k]] = prior[v];
    }
    ws.plane1.assign(g.n_vars, 0);
    ws.plane2.assign(g.n_vars, 0);

    auto decide = [&]() {
        for (int v = 0; v < g.n_vars; ++v) {
            const int o = argmax_symbol(ws.posterior[v]);
            ws.plane1[v] = static_cast<std::uint8_t>(joint_bit1(o));
            ws.plane2[v] = static_cast<std::uint8_t>(joint_bit2(o));
        }
    };

    if (iters == 0 || g.n_edges() == 0) {
        decide();
        res.iters_used = 0;
    }

    for (int it = 1; it <= iters && g.n_edges() > 0; ++it) {
        // Check update: product of transformed inputs, leave-one-out via
        // forward/backward partial products.
        for (int m = 0; m < g.n_checks; ++m) {
            const int lo = g.chk_ptr[m], hi = g.chk_ptr[m + 1], deg = hi - lo;
            ws.fwd.resize(deg + 1);
            ws.fwd[0] = {1.0, 1.0, 1.0, 1.0};
            for (int k = 0; k < deg; ++k) {
                const auto t = wht(ws.v2c[lo + k]);
                for (int s = 0; s < 4; ++s) ws.fwd[k + 1][s] = ws.fwd[k][s] * t[s];
            }
            std::array<double, 4> back{1.0, 1.0, 1.0, 1.0};
            for (int k = deg - 1; k >= 0; --k) {
                std::array<double, 4> prod;
                for (int s = 0; s < 4; ++s) prod[s] = ws.fwd[k][s] * back[s];
                auto msg = iwht_pmf(prod);
                if (!msg.normalize()) ++res.contradictions;
                ws.c2v[lo + k] = msg;
                const auto t = wht(ws.v2c[lo + k]);
                for (int s = 0; s < 4; ++s) back[s] *= t[s];
            }
        }

        // Variable update: prior times all-but-one incoming messages.
        for (int v = 0; v < g.n_vars; ++v) {
            const int lo = g.var_ptr[v], hi = g.var_ptr[v + 1], deg = hi - lo;
            ws.fwd_var.resize(deg + 1);
            ws.fwd_var[0] = prior[v];
            for (int k = 0; k < deg; ++k) {
                ws.fwd_var[k + 1] = var_combine(ws.fwd_var[k], ws.c2v[g.var_edge[lo + k]],
                                                &res.contradictions);
            }
            JointPMF back{{1.0, 1.0, 1.0, 1.0}};
            for (int k = deg - 1; k >= 0; --k) {
                ws.v2c[g.var_edge[lo + k]] =
                    var_combine(ws.fwd_var[k], back, &res.contradictions);
                for (int o = 0; o < 4; ++o) back[o] *= ws.c2v[g.var_edge[lo + k]][o];
                if (double s = back.sum(); s > 0.0) {
                    for (int o = 0; o < 4; ++o) back[o] /= s;
                }
            }
            ws.posterior[v] = ws.fwd_var[deg];
        }

        res.iters_used = it;
        decide();
        if (early_stop && syndrome_ok(ws.plane1, hc) && syndrome_ok(ws.plane2, hc)) break;
    }

    res.w = ws.posterior;
    res.c1_hat = BinVector::from_dense(ws.plane1);
    res.c2_hat = BinVector::from_dense(ws.plane2);
    res.parity_ok = syndrome_ok(ws.plane1, hc) && syndrome_ok(ws.plane2, hc);
    return res;
}

std::vector<JointPMF> apply_prior(const std::vector<JointPMF>& p_ch,
                                  const std::vector<BitPMF>& e_prior) {
    std::vector<JointPMF> prior(p_ch.size());
    for (std::size_t i = 0; i < p_ch.size(); ++i) {
        for (int o = 0; o < 4; ++o) prior[i][o] = p_ch[i][o] * e_prior[i][joint_bit2(o)];
        prior[i].normalize();
    }
    return prior;
}

// Binary sum-product with a prebuilt graph.
struct SpaWorkspace {
    std::vector<double> v2c, c2v, fwd;
    std::vector<std::uint8_t> hard;
};

BinarySpaResult spa_run(const Graph& g, const BinMatrix& h, std::span<const double> intrinsic,
                        int iters, bool early_stop, SpaWorkspace& ws) {
    BinarySpaResult res;
    res.posterior_llr.assign(intrinsic.begin(), intrinsic.end());
    ws.v2c.assign(g.n_edges(), 0.0);
    ws.c2v.assign(g.n_edges(), 0.0);
    for (int v = 0; v < g.n_vars; ++v) {
        for (int k = g.var_ptr[v]; k < g.var_ptr[v + 1]; ++k) {
            ws.v2c[g.var_edge[k]] = clamp_llr(intrinsic[v]);
        }
    }
    ws.hard.assign(g.n_vars, 0);
    auto decide = [&]() {
        for (int v = 0; v < g.n_vars; ++v) ws.hard[v] = res.posterior_llr[v] < 0.0 ? 1 : 0;
    };
    decide();

    for (int it = 1; it <= iters && g.n_edges() > 0; ++it) {
        for (int m = 0; m < g.n_checks; ++m) {
            const int lo = g.chk_ptr[m], hi = g.chk_ptr[m + 1], deg = hi - lo;
            ws.fwd.resize(deg + 1);
            ws.fwd[0] = 1.0;
            for (int k = 0; k < deg; ++k) {
                ws.fwd[k + 1] = ws.fwd[k] * std::tanh(0.5 * ws.v2c[lo + k]);
            }
            double back = 1.0;
            for (int k = deg - 1; k >= 0; --k) {
                const double t = std::clamp(ws.fwd[k] * back, -1.0 + 1e-15, 1.0 - 1e-15);
                ws.c2v[lo + k] = clamp_llr(2.0 * std::atanh(t));
                back *= std::tanh(0.5 * ws.v2c[lo + k]);
            }
        }
        for (int v = 0; v < g.n_vars; ++v) {
            const int lo = g.var_ptr[v], hi = g.var_ptr[v + 1];
            double total = intrinsic[v];
            for (int k = lo; k < hi; ++k) total += ws.c2v[g.var_edge[k]];
            res.posterior_llr[v] = total;
            for (int k = lo; k < hi; ++k) {
                ws.v2c[g.var_edge[k]] = clamp_llr(total - ws.c2v[g.var_edge[k]]);
            }
        }
        res.iters_used = it;
        decide();
        if (early_stop && syndrome_ok(ws.hard, h)) break;
    }

    res.hard = ws.hard;
    res.parity_ok = syndrome_ok(ws.hard, h);
    return res;
}

std::vector<JointPMF> channel_posteriors(std::span<const double> y, const ChannelParams& params) {
    std::vector<JointPMF> p(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) p[i] = joint_channel_probs(y[i], params);
    return p;
}

} // namespace

JointPMF var_combine(const JointPMF& a, const JointPMF& b, long* contradictions) {
    JointPMF out;
    for (int o = 0; o < 4; ++o) out[o] = a[o] * b[o];
    if (!out.normalize() && contradictions) ++*contradictions;
    return out;
}

JointPMF chk_combine(const JointPMF& a, const JointPMF& b) {
    JointPMF out;
    for (int o = 0; o < 4; ++o) {
        double s = 0.0;
        for (int m = 0; m < 4; ++m) s += a[m] * b[m ^ o];
        out[o] = s;
    }
    return out;
}

JudResult jud_decode(const std::vector<JointPMF>& p_ch, const std::vector<BitPMF>& e_prior,
                     const BinMatrix& hc, int iters, bool early_stop) {
    if (static_cast<int>(p_ch.size()) != hc.n_cols()) {
        throw dimension_error("jud_decode: p_ch length != matrix columns");
    }
    if (e_prior.size() != p_ch.size()) {
        throw dimension_error("jud_decode: e_prior length != p_ch length");
    }
    Graph g(hc);
    JudWorkspace ws;
    return jud_run(g, hc, apply_prior(p_ch, e_prior), iters, early_stop, ws);
}

std::vector<BitPMF> marginalize_user2(const std::vector<JointPMF>& w) {
    std::vector<BitPMF> a(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        double a0 = w[i][0] + w[i][2];
        double a1 = w[i][1] + w[i][3];
        const double s = a0 + a1;
        if (s > 0.0) {
            a0 /= s;
            a1 /= s;
        } else {
            a0 = a1 = 0.5;
        }
        a[i] = {a0, a1};
    }
    return a;
}

BinarySpaResult binary_spa(const BinMatrix& h, std::span<const double> intrinsic_llr, int iters,
                           bool early_stop) {
    if (static_cast<int>(intrinsic_llr.size()) != h.n_cols()) {
        throw dimension_error("binary_spa: llr length != matrix columns");
    }
    Graph g(h);
    SpaWorkspace ws;
    return spa_run(g, h, intrinsic_llr, iters, early_stop, ws);
}

std::vector<BitPMF> rud_decode(const std::vector<BitPMF>& a, const BinMatrix& ha, int iters) {
    if (static_cast<int>(a.size()) != ha.n_cols()) {
        throw dimension_error("rud_decode: prior length != matrix columns");
    }
    std::vector<BitPMF> e(a.size(), BitPMF{0.5, 0.5});
    if (ha.n_rows() == 0) return e;

    std::vector<double> prior_llr(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double p0 = std::max(a[i][0], 0.0), p1 = std::max(a[i][1], 0.0);
        prior_llr[i] = clamp_llr(std::log(std::max(p0, 1e-300)) - std::log(std::max(p1, 1e-300)));
    }
    auto res = binary_spa(ha, prior_llr, iters);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ext = clamp_llr(res.posterior_llr[i] - prior_llr[i]);
        const double e0 = 1.0 / (1.0 + std::exp(-ext));
        e[i] = {e0, 1.0 - e0};
    }
    return e;
}

DecodeOutcome rdjd_decode(std::span<const double> y, const CodePair& pair,
                          const ChannelParams& params, const RdjdConfig& cfg) {
    if (static_cast<int>(y.size()) != pair.block_length()) {
        throw dimension_error("rdjd_decode: block length mismatch");
    }
    const auto p_ch = channel_posteriors(y, params);
    Graph gc(pair.hc);
    JudWorkspace ws;

    DecodeOutcome out;
    std::vector<BitPMF> e(y.size(), BitPMF{0.5, 0.5});
    std::vector<std::uint8_t> c1, c2;
    for (int round = 1; round <= cfg.outer_iters; ++round) {
        auto jud = jud_run(gc, pair.hc, apply_prior(p_ch, e), cfg.inner_iters, cfg.early_stop, ws);
        out.contradictions += jud.contradictions;
        out.outer_iters_used = round;
        c1 = jud.c1_hat.to_dense();
        c2 = jud.c2_hat.to_dense();
        out.c1_hat = std::move(jud.c1_hat);
        out.c2_hat = std::move(jud.c2_hat);
        out.converged1 = syndrome_ok(c1, pair.h1);
        out.converged2 = syndrome_ok(c2, pair.h2);
        if (cfg.early_stop && out.converged1 && out.converged2) break;
        if (round < cfg.outer_iters) {
            e = rud_decode(marginalize_user2(jud.w), pair.ha, cfg.inner_iters);
        }
    }
    return out;
}

DecodeOutcome xorcd_decode(std::span<const double> y, const CodePair& pair,
                           const ChannelParams& params, int iters_per_step) {
    if (static_cast<int>(y.size()) != pair.block_length()) {
        throw dimension_error("xorcd_decode: block length mismatch");
    }
    std::vector<double> llr_nc(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) llr_nc[i] = nc_llr(y[i], params);
    const auto step1 = binary_spa(pair.hc, llr_nc, iters_per_step);

    std::vector<double> llr1(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double gain = params.h1 + params.h2 * bpsk(step1.hard[i]);
        llr1[i] = 2.0 * gain * y[i] / params.sigma2;
    }
    const auto step2 = binary_spa(pair.h1, llr1, iters_per_step);

    std::vector<std::uint8_t> c2(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) c2[i] = step2.hard[i] ^ step1.hard[i];

    DecodeOutcome out;
    out.c1_hat = BinVector::from_dense(step2.hard);
    out.c2_hat = BinVector::from_dense(c2);
    out.converged1 = step2.parity_ok;
    out.converged2 = step1.parity_ok && step2.parity_ok && syndrome_ok(c2, pair.h2);
    out.outer_iters_used = 1;
    return out;
}

DecodeOutcome sic_decode(std::span<const double> y, const CodePair& pair,
                         const ChannelParams& params, int iters_per_user) {
    if (static_cast<int>(y.size()) != pair.block_length()) {
        throw dimension_error("sic_decode: block length mismatch");
    }
    std::vector<double> llr1(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) llr1[i] = single_user_llr(y[i], params, 1);
    const auto step1 = binary_spa(pair.h1, llr1, iters_per_user);

    std::vector<double> llr2(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double residual = y[i] - params.h1 * bpsk(step1.hard[i]);
        llr2[i] = 2.0 * params.h2 * residual / params.sigma2;
    }
    const auto step2 = binary_spa(pair.h2, llr2, iters_per_user);

    DecodeOutcome out;
    out.c1_hat = BinVector::from_dense(step1.hard);
    out.c2_hat = BinVector::from_dense(step2.hard);
    out.converged1 = step1.parity_ok;
    out.converged2 = step2.parity_ok;
    out.outer_iters_used = 1;
    return out;
}

} // namespace rdmac
