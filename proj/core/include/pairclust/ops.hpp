#pragma once

#include <cstddef>
#include <vector>

#include "pairclust/tensor.hpp"

namespace pairclust::diffcore {

// Forward and backward rules for every primitive in the network graph.  The
// backward of f(x) takes the upstream gradient and returns the gradient with
// respect to each input; parameter gradients are accumulated by the caller.

Tensor matmul(const Tensor& a, const Tensor& b);  // (m x k) * (k x n)
struct MatmulGrads {
  Tensor da, db;
};
MatmulGrads matmul_backward(const Tensor& a, const Tensor& b, const Tensor& dc);

Tensor add(const Tensor& a, const Tensor& b);  // backward is identity into both

Tensor hadamard(const Tensor& a, const Tensor& b);
struct HadamardGrads {
  Tensor da, db;
};
HadamardGrads hadamard_backward(const Tensor& a, const Tensor& b, const Tensor& dc);

// Elementwise nonlinearities; backward takes the forward *output* y.
Tensor sigmoid(const Tensor& x);
Tensor sigmoid_backward(const Tensor& y, const Tensor& dy);  // y(1-y) dy
Tensor tanh(const Tensor& x);
Tensor tanh_backward(const Tensor& y, const Tensor& dy);  // (1-y^2) dy

Tensor concat(const Tensor& a, const Tensor& b);  // rank-1 only
struct ConcatGrads {
  Tensor da, db;
};
ConcatGrads concat_backward(size_t size_a, const Tensor& dc);

// Per-dimension max over a series of equal-length vectors; ties resolve to the
// earliest step so the backward route is unambiguous.
struct MaxPoolResult {
  Tensor out;
  std::vector<size_t> argmax;
};
MaxPoolResult temporal_max_pool(const std::vector<Tensor>& series);
std::vector<Tensor> temporal_max_pool_backward(const MaxPoolResult& fwd,
                                               size_t series_len, size_t dim,
                                               const Tensor& dout);

// Numerically stable softmax (max subtracted before exponentiation).
Tensor softmax(const Tensor& v);
Tensor softmax_backward(const Tensor& y, const Tensor& dy);

double cosine(const Tensor& p, const Tensor& q);  // error on zero norm
struct CosineGrads {
  Tensor dp, dq;
};
CosineGrads cosine_backward(const Tensor& p, const Tensor& q, double ds);

double se_cost(double similarity, int label);           // (s - l)^2
double se_cost_backward(double similarity, int label);  // 2 (s - l)

// Buffer-reusing kernels for the recurrent inner loops.  Same math as matmul
// and matmul_backward, without per-step allocation.
void matvec(const Tensor& w, const double* x, double* y);        // y  = W x
void matvec_acc(const Tensor& w, const double* x, double* y);    // y += W x
void matvec_t_acc(const Tensor& w, const double* a, double* dx); // dx += W^T a
void outer_acc(Tensor& dw, const double* a, const double* x);    // dW += a x^T

}  // namespace pairclust::diffcore
