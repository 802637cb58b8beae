#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <vector>

#include "demotif/kernels.hpp"
#include "demotif/rng.hpp"

using namespace demotif;

namespace {

// Independent oracle: per output element, bias first, then k-major c-minor
// accumulation, mirroring the documented summation order.
void naive_conv_forward(const std::vector<double>& in, int len, int cin,
                        const std::vector<double>& filt, int k, int cout,
                        const std::vector<double>& bias,
                        std::vector<double>& out) {
  const int len_out = len - k + 1;
  out.assign(static_cast<size_t>(len_out) * cout, 0.0);
  for (int t = 0; t < len_out; ++t) {
    for (int o = 0; o < cout; ++o) {
      double acc = bias[static_cast<size_t>(o)];
      for (int kk = 0; kk < k; ++kk) {
        for (int c = 0; c < cin; ++c) {
          acc += in[static_cast<size_t>(t + kk) * cin + c] *
                 filt[(static_cast<size_t>(kk) * cin + c) * cout + o];
        }
      }
      out[static_cast<size_t>(t) * cout + o] = acc;
    }
  }
}

struct ConvData {
  int len, cin, k, cout;
  std::vector<double> in, filt, bias;
};

ConvData random_conv(int len, int cin, int k, int cout, uint64_t seed) {
  ConvData d{len, cin, k, cout, {}, {}, {}};
  Rng rng(seed);
  d.in.resize(static_cast<size_t>(len) * cin);
  d.filt.resize(static_cast<size_t>(k) * cin * cout);
  d.bias.resize(static_cast<size_t>(cout));
  for (auto& v : d.in) v = rng.uniform(-2.0, 2.0);
  for (auto& v : d.filt) v = rng.uniform(-2.0, 2.0);
  for (auto& v : d.bias) v = rng.uniform(-2.0, 2.0);
  return d;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("conv1d forward: hand example") {
  // input [[1],[2],[3]], filter [1,1], bias 0 -> [[3],[5]]
  std::vector<double> in{1, 2, 3}, filt{1, 1}, bias{0};
  std::vector<double> out(2);
  kernels::conv1d_forward(in.data(), 3, 1, filt.data(), 2, 1, bias.data(), out.data());
  CHECK(out == std::vector<double>{3, 5});
}

TEST_CASE("conv1d forward: zero filters give the bias, identity kernel copies") {
  std::vector<double> in{0.5, -1, 2, 0, 1, 3}, filt(6, 0.0), bias{7.0};
  std::vector<double> out(1);
  // K=2, cin=3, cout=1 over a length-2 input
  kernels::conv1d_forward(in.data(), 2, 3, filt.data(), 2, 1, bias.data(), out.data());
  CHECK(out[0] == 7.0);

  // one-hot "ACGT" with a 1x4x4 identity filter reproduces the input
  std::vector<double> onehot(16, 0.0);
  for (int i = 0; i < 4; ++i) onehot[static_cast<size_t>(i) * 4 + i] = 1.0;
  std::vector<double> eye(16, 0.0);
  for (int i = 0; i < 4; ++i) eye[static_cast<size_t>(i) * 4 + i] = 1.0;
  std::vector<double> bias4(4, 0.0), out4(16);
  kernels::conv1d_forward(onehot.data(), 4, 4, eye.data(), 1, 4, bias4.data(), out4.data());
  CHECK(out4 == onehot);
}

TEST_CASE("conv1d forward matches the naive oracle exactly") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto d = random_conv(5, 3, 2 + static_cast<int>(seed % 3), 4, seed);
    std::vector<double> expected;
    naive_conv_forward(d.in, d.len, d.cin, d.filt, d.k, d.cout, d.bias, expected);

    std::vector<double> got(expected.size());
    kernels::conv1d_forward(d.in.data(), d.len, d.cin, d.filt.data(), d.k,
                            d.cout, d.bias.data(), got.data());
    CHECK(bitwise_equal(got, expected));

    std::vector<double> got_ref(expected.size());
    kernels::ref::conv1d_forward(d.in.data(), d.len, d.cin, d.filt.data(), d.k,
                                 d.cout, d.bias.data(), got_ref.data());
    CHECK(bitwise_equal(got_ref, expected));
  }
}

TEST_CASE("parallel kernels are bitwise equal to the serial reference") {
  // Sizes straddle the parallelization threshold.
  const std::vector<ConvData> cases = {
      random_conv(101, 4, 5, 128, 1),
      random_conv(49, 128, 5, 128, 2),
      random_conv(7, 2, 3, 5, 3),
      random_conv(300, 16, 5, 64, 4),
  };
  for (const auto& d : cases) {
    const int len_out = d.len - d.k + 1;

    std::vector<double> fwd_ref(static_cast<size_t>(len_out) * d.cout);
    std::vector<double> fwd_par(fwd_ref.size());
    kernels::ref::conv1d_forward(d.in.data(), d.len, d.cin, d.filt.data(), d.k,
                                 d.cout, d.bias.data(), fwd_ref.data());
    kernels::conv1d_forward(d.in.data(), d.len, d.cin, d.filt.data(), d.k,
                            d.cout, d.bias.data(), fwd_par.data());
    CHECK(bitwise_equal(fwd_ref, fwd_par));

    Rng rng(99);
    std::vector<double> dout(fwd_ref.size());
    for (auto& v : dout) v = rng.uniform(-1.0, 1.0);

    std::vector<double> din_ref(d.in.size(), 0.125);
    std::vector<double> din_par(d.in.size(), 0.125);
    kernels::ref::conv1d_backward_input(dout.data(), len_out, d.cout,
                                        d.filt.data(), d.k, d.cin,
                                        din_ref.data(), d.len);
    kernels::conv1d_backward_input(dout.data(), len_out, d.cout, d.filt.data(),
                                   d.k, d.cin, din_par.data(), d.len);
    CHECK(bitwise_equal(din_ref, din_par));

    std::vector<double> dfilt_ref(d.filt.size(), 0.5), dbias_ref(d.bias.size(), 0.5);
    std::vector<double> dfilt_par(d.filt.size(), 0.5), dbias_par(d.bias.size(), 0.5);
    kernels::ref::conv1d_backward_params(d.in.data(), d.len, d.cin, dout.data(),
                                         len_out, d.cout, d.k, dfilt_ref.data(),
                                         dbias_ref.data());
    kernels::conv1d_backward_params(d.in.data(), d.len, d.cin, dout.data(),
                                    len_out, d.cout, d.k, dfilt_par.data(),
                                    dbias_par.data());
    CHECK(bitwise_equal(dfilt_ref, dfilt_par));
    CHECK(bitwise_equal(dbias_ref, dbias_par));
  }
}
