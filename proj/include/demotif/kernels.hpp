#pragma once

#include <cstdint>

// Hot inner loops of the network, split out from the graph layer.
//
// Layouts (row-major):
//   input   len x cin          in[t*cin + c]
//   filters k x cin x cout     filt[(kk*cin + c)*cout + o]
//   output  len_out x cout     out[t*cout + o],  len_out = len - k + 1
//
// Every kernel accumulates each output element in a fixed serial order, and
// the OpenMP variants assign whole output elements to threads. Results are
// therefore bit-identical to the serial reference for any thread count.
namespace demotif::kernels {

// Serial reference implementations, kept for equivalence tests and the
// kernel benchmark.
namespace ref {

void conv1d_forward(const double* in, int len, int cin, const double* filt,
                    int k, int cout, const double* bias, double* out);

// din += conv gradient; din is len x cin and must be pre-zeroed or hold
// a running accumulation.
void conv1d_backward_input(const double* dout, int len_out, int cout,
                           const double* filt, int k, int cin, double* din,
                           int len_in);

// dfilt/dbias accumulate likewise.
void conv1d_backward_params(const double* in, int len_in, int cin,
                            const double* dout, int len_out, int cout, int k,
                            double* dfilt, double* dbias);

}  // namespace ref

void conv1d_forward(const double* in, int len, int cin, const double* filt,
                    int k, int cout, const double* bias, double* out);

void conv1d_backward_input(const double* dout, int len_out, int cout,
                           const double* filt, int k, int cin, double* din,
                           int len_in);

void conv1d_backward_params(const double* in, int len_in, int cin,
                            const double* dout, int len_out, int cout, int k,
                            double* dfilt, double* dbias);

}  // namespace demotif::kernels
