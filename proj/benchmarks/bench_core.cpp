#include <benchmark/benchmark.h>

#include "rdmac/channel.hpp"
#include "rdmac/codes.hpp"
#include "rdmac/decoders.hpp"
#include "rdmac/exitchart.hpp"
#include "rdmac/rng.hpp"

using namespace rdmac;

namespace {

CodePair bench_pair() {
    static const CodePair pair = [] {
        auto h1 = make_regular_ldpc(1229, 4096, 3, 7);
        return extend_re(h1, ReParams{1229, 3, 7});
    }();
    return pair;
}

std::vector<double> bench_rx(const CodePair& pair, const ChannelParams& params) {
    Rng rng(42);
    Encoder enc1(pair.h1), enc2(pair.h2);
    std::vector<std::uint8_t> u1(enc1.message_length()), u2(enc2.message_length());
    for (auto& b : u1) b = static_cast<std::uint8_t>(rng.bit());
    for (auto& b : u2) b = static_cast<std::uint8_t>(rng.bit());
    return transmit(modulate(enc1.encode_dense(u1)), modulate(enc2.encode_dense(u2)), params, rng);
}

void BM_chk_combine(benchmark::State& state) {
    JointPMF a{{0.4, 0.3, 0.2, 0.1}}, b{{0.7, 0.1, 0.1, 0.1}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(chk_combine(a, b));
    }
}
BENCHMARK(BM_chk_combine);

void BM_var_combine(benchmark::State& state) {
    JointPMF a{{0.4, 0.3, 0.2, 0.1}}, b{{0.1, 0.2, 0.3, 0.4}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(var_combine(a, b));
    }
}
BENCHMARK(BM_var_combine);

void BM_joint_channel_probs(benchmark::State& state) {
    const ChannelParams params(1.5, 0.9, 0.3);
    double y = -1.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(joint_channel_probs(y, params));
        y = -y;
    }
}
BENCHMARK(BM_joint_channel_probs);

void BM_jud_activation(benchmark::State& state) {
    const auto pair = bench_pair();
    const ChannelParams params(std::sqrt(3.0), 1.0, snr_db_to_sigma2(4.0));
    const auto y = bench_rx(pair, params);
    std::vector<JointPMF> p_ch(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) p_ch[i] = joint_channel_probs(y[i], params);
    const std::vector<BitPMF> e(y.size(), BitPMF{0.5, 0.5});
    for (auto _ : state) {
        benchmark::DoNotOptimize(jud_decode(p_ch, e, pair.hc, static_cast<int>(state.range(0)),
                                            false));
    }
}
BENCHMARK(BM_jud_activation)->Arg(1)->Arg(30);

void BM_rdjd_block(benchmark::State& state) {
    const auto pair = bench_pair();
    const ChannelParams params(std::sqrt(3.0), 1.0, snr_db_to_sigma2(4.0));
    const auto y = bench_rx(pair, params);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rdjd_decode(y, pair, params, RdjdConfig{}));
    }
}
BENCHMARK(BM_rdjd_block);

void BM_binary_spa(benchmark::State& state) {
    const auto pair = bench_pair();
    const ChannelParams params(std::sqrt(3.0), 1.0, snr_db_to_sigma2(4.0));
    const auto y = bench_rx(pair, params);
    std::vector<double> llr(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) llr[i] = nc_llr(y[i], params);
    for (auto _ : state) {
        benchmark::DoNotOptimize(binary_spa(pair.hc, llr, 30, false));
    }
}
BENCHMARK(BM_binary_spa);

void BM_j_function(benchmark::State& state) {
    double s = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(j_function(s));
        s = s < 5.0 ? s + 0.1 : 0.3;
    }
}
BENCHMARK(BM_j_function);

} // namespace

BENCHMARK_MAIN();
