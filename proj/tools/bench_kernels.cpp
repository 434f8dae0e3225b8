// Benchmark: OpenMP kernels against their serial reference twins.
// Prints one row per kernel with per-call time and speedup.

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "omni/alignnet.hpp"
#include "omni/compression.hpp"
#include "omni/numerics.hpp"
#include "omni/rng.hpp"
#include "omni/temporal.hpp"

using namespace omni;

namespace {

double time_per_call(const std::function<void()>& fn, int min_reps = 3) {
    fn();  // warm up
    int reps = min_reps;
    for (;;) {
        const auto start = std::chrono::steady_clock::now();
        for (int i = 0; i < reps; ++i) fn();
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > 0.2 || reps > 1 << 14) return elapsed / reps;
        reps *= 4;
    }
}

void report(const char* name, double serial_s, double parallel_s) {
    std::printf("%-28s serial %10.3f ms   omp %10.3f ms   speedup %5.2fx\n", name,
                serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP\n\n");
#endif

    SeededRng rng(1234);

    {
        const int n = 256;
        Mat a(n, n), b(n, n);
        for (double& x : a.data) x = rng.normal();
        for (double& x : b.data) x = rng.normal();
        const double serial = time_per_call([&] { (void)matmul_serial(a, b); });
        const double parallel = time_per_call([&] { (void)matmul(a, b); });
        report("matmul 256x256", serial, parallel);
    }

    {
        CrteConfig cfg;
        cfg.dim = 128;
        cfg.t_max = 600.0;
        cfg.theta = 10000.0;
        Mat seq(4096, cfg.dim);
        for (double& x : seq.data) x = rng.normal();
        Vec ts(4096);
        for (double& t : ts) t = rng.uniform(0.0, cfg.t_max);
        const double serial = time_per_call([&] { (void)apply_crte_seq_serial(seq, ts, cfg); });
        const double parallel = time_per_call([&] { (void)apply_crte_seq(seq, ts, cfg); });
        report("crte 4096 x 128", serial, parallel);
    }

    {
        AudioTokenSeq seq{Mat(20000, 64), 25.0};
        for (double& x : seq.tokens.data) x = rng.normal();
        const double serial =
            time_per_call([&] { (void)pool_sequence_serial(seq, PoolMode::max); });
        const double parallel = time_per_call([&] { (void)pool_sequence(seq, PoolMode::max); });
        report("max pool 20000 x 64", serial, parallel);

        const Mat kernel = make_avg_conv_kernel(64);
        const double conv_serial =
            time_per_call([&] { (void)conv1d_downsample_serial(seq, kernel); });
        const double conv_parallel = time_per_call([&] { (void)conv1d_downsample(seq, kernel); });
        report("conv1d 20000 x 64", conv_serial, conv_parallel);
    }

    {
        SeededRng init_rng(5);
        const int c = 64;
        const AlignHeadParams params = init_align_head(c, init_rng, 0.02);
        OmniBatch batch;
        for (int i = 0; i < 64; ++i) {
            Mat vs(16, c), as(8, c);
            for (double& x : vs.data) x = rng.normal();
            for (double& x : as.data) x = rng.normal();
            batch.vision_seqs.push_back(std::move(vs));
            batch.audio_seqs.push_back(std::move(as));
        }
        const double serial =
            time_per_call([&] { (void)compute_omni_embeddings_serial(batch, params); });
        const double parallel = time_per_call([&] { (void)compute_omni_embeddings(batch, params); });
        report("omni embeddings K=64 C=64", serial, parallel);
    }

    {
        Mat v(256, 64), a(256, 64);
        for (int i = 0; i < 256; ++i) {
            Vec rv(64), ra(64);
            for (double& x : rv) x = rng.normal();
            for (double& x : ra) x = rng.normal();
            v.set_row(i, l2_normalize(rv));
            a.set_row(i, l2_normalize(ra));
        }
        const double serial =
            time_per_call([&] { (void)contrastive_loss_grad_serial(v, a, 1.0); });
        const double parallel = time_per_call([&] { (void)contrastive_loss_grad(v, a, 1.0); });
        report("contrastive grad K=256", serial, parallel);
    }

    return 0;
}
