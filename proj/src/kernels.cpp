#include "demotif/kernels.hpp"

#include <algorithm>

namespace demotif::kernels {

namespace ref {

void conv1d_forward(const double* in, int len, int cin, const double* filt,
                    int k, int cout, const double* bias, double* out) {
  const int len_out = len - k + 1;
  for (int t = 0; t < len_out; ++t) {
    double* out_t = out + static_cast<int64_t>(t) * cout;
    for (int o = 0; o < cout; ++o) out_t[o] = bias[o];
    for (int kk = 0; kk < k; ++kk) {
      const double* in_row = in + static_cast<int64_t>(t + kk) * cin;
      const double* f_k = filt + static_cast<int64_t>(kk) * cin * cout;
      for (int c = 0; c < cin; ++c) {
        const double x = in_row[c];
        const double* f = f_k + static_cast<int64_t>(c) * cout;
        for (int o = 0; o < cout; ++o) out_t[o] += x * f[o];
      }
    }
  }
}

void conv1d_backward_input(const double* dout, int len_out, int cout,
                           const double* filt, int k, int cin, double* din,
                           int len_in) {
  for (int i = 0; i < len_in; ++i) {
    double* din_row = din + static_cast<int64_t>(i) * cin;
    const int kk_lo = std::max(0, i - (len_out - 1));
    const int kk_hi = std::min(k - 1, i);
    for (int kk = kk_lo; kk <= kk_hi; ++kk) {
      const double* dout_row = dout + static_cast<int64_t>(i - kk) * cout;
      const double* f_k = filt + static_cast<int64_t>(kk) * cin * cout;
      for (int c = 0; c < cin; ++c) {
        const double* f = f_k + static_cast<int64_t>(c) * cout;
        double acc = 0.0;
        for (int o = 0; o < cout; ++o) acc += dout_row[o] * f[o];
        din_row[c] += acc;
      }
    }
  }
}

void conv1d_backward_params(const double* in, int len_in, int cin,
                            const double* dout, int len_out, int cout, int k,
                            double* dfilt, double* dbias) {
  for (int o = 0; o < cout; ++o) {
    double acc = 0.0;
    for (int t = 0; t < len_out; ++t) acc += dout[static_cast<int64_t>(t) * cout + o];
    dbias[o] += acc;
  }
  (void)len_in;
  for (int kk = 0; kk < k; ++kk) {
    for (int c = 0; c < cin; ++c) {
      double* df = dfilt + (static_cast<int64_t>(kk) * cin + c) * cout;
      for (int t = 0; t < len_out; ++t) {
        const double x = in[static_cast<int64_t>(t + kk) * cin + c];
        const double* dout_row = dout + static_cast<int64_t>(t) * cout;
        for (int o = 0; o < cout; ++o) df[o] += x * dout_row[o];
      }
    }
  }
}

}  // namespace ref

// Parallel regions are only worth opening above roughly this many
// multiply-adds per call.
constexpr int64_t kParallelThreshold = 1 << 16;

void conv1d_forward(const double* in, int len, int cin, const double* filt,
                    int k, int cout, const double* bias, double* out) {
  const int len_out = len - k + 1;
  const int64_t work = static_cast<int64_t>(len_out) * cout * k * cin;
#pragma omp parallel for schedule(static) if (work >= kParallelThreshold)
  for (int t = 0; t < len_out; ++t) {
    double* out_t = out + static_cast<int64_t>(t) * cout;
    for (int o = 0; o < cout; ++o) out_t[o] = bias[o];
    for (int kk = 0; kk < k; ++kk) {
      const double* in_row = in + static_cast<int64_t>(t + kk) * cin;
      const double* f_k = filt + static_cast<int64_t>(kk) * cin * cout;
      for (int c = 0; c < cin; ++c) {
        const double x = in_row[c];
        const double* f = f_k + static_cast<int64_t>(c) * cout;
        for (int o = 0; o < cout; ++o) out_t[o] += x * f[o];
      }
    }
  }
}

void conv1d_backward_input(const double* dout, int len_out, int cout,
                           const double* filt, int k, int cin, double* din,
                           int len_in) {
  const int64_t work = static_cast<int64_t>(len_in) * cin * k * cout;
#pragma omp parallel for schedule(static) if (work >= kParallelThreshold)
  for (int i = 0; i < len_in; ++i) {
    double* din_row = din + static_cast<int64_t>(i) * cin;
    const int kk_lo = std::max(0, i - (len_out - 1));
    const int kk_hi = std::min(k - 1, i);
    for (int kk = kk_lo; kk <= kk_hi; ++kk) {
      const double* dout_row = dout + static_cast<int64_t>(i - kk) * cout;
      const double* f_k = filt + static_cast<int64_t>(kk) * cin * cout;
      for (int c = 0; c < cin; ++c) {
        const double* f = f_k + static_cast<int64_t>(c) * cout;
        double acc = 0.0;
        for (int o = 0; o < cout; ++o) acc += dout_row[o] * f[o];
        din_row[c] += acc;
      }
    }
  }
}

void conv1d_backward_params(const double* in, int len_in, int cin,
                            const double* dout, int len_out, int cout, int k,
                            double* dfilt, double* dbias) {
  (void)len_in;
  const int64_t bias_work = static_cast<int64_t>(len_out) * cout;
#pragma omp parallel for schedule(static) if (bias_work >= kParallelThreshold)
  for (int o = 0; o < cout; ++o) {
    double acc = 0.0;
    for (int t = 0; t < len_out; ++t) acc += dout[static_cast<int64_t>(t) * cout + o];
    dbias[o] += acc;
  }
  const int64_t work = static_cast<int64_t>(k) * cin * len_out * cout;
#pragma omp parallel for collapse(2) schedule(static) if (work >= kParallelThreshold)
  for (int kk = 0; kk < k; ++kk) {
    for (int c = 0; c < cin; ++c) {
      double* df = dfilt + (static_cast<int64_t>(kk) * cin + c) * cout;
      for (int t = 0; t < len_out; ++t) {
        const double x = in[static_cast<int64_t>(t + kk) * cin + c];
        const double* dout_row = dout + static_cast<int64_t>(t) * cout;
        for (int o = 0; o < cout; ++o) df[o] += x * dout_row[o];
      }
    }
  }
}

}  // namespace demotif::kernels
