// Compares the serial reference kernels against the OpenMP variants and
// reports throughput, plus whole-model prediction rates. The two paths
// must agree bitwise; this also cross-checks that while timing.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "demotif/kernels.hpp"
#include "demotif/model.hpp"
#include "demotif/rng.hpp"
#include "demotif/seq.hpp"

using namespace demotif;

namespace {

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct ConvCase {
  const char* name;
  int len, cin, k, cout;
};

void fill_random(std::vector<double>& v, Rng& rng) {
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
}

template <typename F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now_s();
    fn();
    best = std::min(best, now_s() - t0);
  }
  return best;
}

void bench_conv(const ConvCase& c, int inner_iters) {
  Rng rng(42);
  const int len_out = c.len - c.k + 1;
  std::vector<double> in(static_cast<size_t>(c.len) * c.cin);
  std::vector<double> filt(static_cast<size_t>(c.k) * c.cin * c.cout);
  std::vector<double> bias(static_cast<size_t>(c.cout));
  std::vector<double> out_ref(static_cast<size_t>(len_out) * c.cout);
  std::vector<double> out_par(out_ref.size());
  fill_random(in, rng);
  fill_random(filt, rng);
  fill_random(bias, rng);

  const double flops = 2.0 * len_out * c.cout * c.k * c.cin * inner_iters;
  const double t_ref = time_best_of(3, [&] {
    for (int i = 0; i < inner_iters; ++i) {
      kernels::ref::conv1d_forward(in.data(), c.len, c.cin, filt.data(), c.k,
                                   c.cout, bias.data(), out_ref.data());
    }
  });
  const double t_par = time_best_of(3, [&] {
    for (int i = 0; i < inner_iters; ++i) {
      kernels::conv1d_forward(in.data(), c.len, c.cin, filt.data(), c.k,
                              c.cout, bias.data(), out_par.data());
    }
  });
  const bool identical =
      std::memcmp(out_ref.data(), out_par.data(), out_ref.size() * 8) == 0;
  std::printf("%-28s %8.2f GF/s serial %8.2f GF/s omp  speedup %.2fx  %s\n",
              c.name, flops / t_ref / 1e9, flops / t_par / 1e9, t_ref / t_par,
              identical ? "bitwise-equal" : "MISMATCH");
}

void bench_predict() {
  ModelConfig cfg;  // stock 3-conv / 5-highway model
  const auto params = build_model(cfg, 7);
  const Dataset ds =
      generate_synthetic(100, 100, cfg.input_len, consensus_pwm("TGACGTCA"), 7);

  std::vector<double> serial_scores, parallel_scores;
#ifdef _OPENMP
  const int max_threads = omp_get_max_threads();
  omp_set_num_threads(1);
#endif
  const double t_serial = time_best_of(2, [&] { serial_scores = predict(params, cfg, ds); });
#ifdef _OPENMP
  omp_set_num_threads(max_threads);
#endif
  const double t_par = time_best_of(2, [&] { parallel_scores = predict(params, cfg, ds); });
  const bool identical = serial_scores == parallel_scores;
  std::printf("%-28s %8.1f seq/s serial %8.1f seq/s omp  speedup %.2fx  %s\n",
              "predict (stock model)", ds.size() / t_serial, ds.size() / t_par,
              t_serial / t_par, identical ? "bitwise-equal" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both paths run serially\n");
#endif
  bench_conv({"conv 101x4 k5 c128", 101, 4, 5, 128}, 200);
  bench_conv({"conv 49x128 k5 c128", 49, 128, 5, 128}, 50);
  bench_conv({"conv 1001x4 k5 c128", 1001, 4, 5, 128}, 20);
  bench_predict();
  return 0;
}
