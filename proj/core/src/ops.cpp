#include "pairclust/ops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pairclust::diffcore {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  require(a.same_shape(b), std::string(op) + ": shape mismatch " + a.shape_str() +
                               " vs " + b.shape_str());
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require(a.cols() == b.rows(), "matmul: inner dimensions " + a.shape_str() + " * " +
                                    b.shape_str());
  Tensor c(a.rows(), b.cols());
  const size_t m = a.rows(), k = a.cols(), n = b.cols();
  for (size_t i = 0; i < m; ++i) {
    double* ci = c.row(i);
    const double* ai = a.row(i);
    for (size_t t = 0; t < k; ++t) {
      const double av = ai[t];
      const double* bt = b.row(t);
      for (size_t j = 0; j < n; ++j) ci[j] += av * bt[j];
    }
  }
  return c;
}

MatmulGrads matmul_backward(const Tensor& a, const Tensor& b, const Tensor& dc) {
  require(dc.rows() == a.rows() && dc.cols() == b.cols(),
          "matmul_backward: upstream shape " + dc.shape_str());
  MatmulGrads g{Tensor(a.rows(), a.cols()), Tensor(b.rows(), b.cols())};
  const size_t m = a.rows(), k = a.cols(), n = b.cols();
  // dA = dC B^T
  for (size_t i = 0; i < m; ++i) {
    const double* dci = dc.row(i);
    double* dai = g.da.row(i);
    for (size_t t = 0; t < k; ++t) {
      const double* bt = b.row(t);
      double acc = 0.0;
      for (size_t j = 0; j < n; ++j) acc += dci[j] * bt[j];
      dai[t] = acc;
    }
  }
  // dB = A^T dC
  for (size_t i = 0; i < m; ++i) {
    const double* ai = a.row(i);
    const double* dci = dc.row(i);
    for (size_t t = 0; t < k; ++t) {
      double* dbt = g.db.row(t);
      const double av = ai[t];
      for (size_t j = 0; j < n; ++j) dbt[j] += av * dci[j];
    }
  }
  return g;
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  Tensor c = a;
  for (size_t i = 0; i < c.size(); ++i) c[i] += b[i];
  return c;
}

Tensor hadamard(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "hadamard");
  Tensor c = a;
  for (size_t i = 0; i < c.size(); ++i) c[i] *= b[i];
  return c;
}

HadamardGrads hadamard_backward(const Tensor& a, const Tensor& b, const Tensor& dc) {
  require_same_shape(a, b, "hadamard_backward");
  require_same_shape(a, dc, "hadamard_backward");
  HadamardGrads g{b, a};
  for (size_t i = 0; i < a.size(); ++i) {
    g.da[i] = b[i] * dc[i];
    g.db[i] = a[i] * dc[i];
  }
  return g;
}

Tensor sigmoid(const Tensor& x) {
  Tensor y = x;
  for (size_t i = 0; i < y.size(); ++i) y[i] = 1.0 / (1.0 + std::exp(-x[i]));
  return y;
}

Tensor sigmoid_backward(const Tensor& y, const Tensor& dy) {
  require_same_shape(y, dy, "sigmoid_backward");
  Tensor dx = y;
  for (size_t i = 0; i < y.size(); ++i) dx[i] = y[i] * (1.0 - y[i]) * dy[i];
  return dx;
}

Tensor tanh(const Tensor& x) {
  Tensor y = x;
  for (size_t i = 0; i < y.size(); ++i) y[i] = std::tanh(x[i]);
  return y;
}

Tensor tanh_backward(const Tensor& y, const Tensor& dy) {
  require_same_shape(y, dy, "tanh_backward");
  Tensor dx = y;
  for (size_t i = 0; i < y.size(); ++i) dx[i] = (1.0 - y[i] * y[i]) * dy[i];
  return dx;
}

Tensor concat(const Tensor& a, const Tensor& b) {
  require(a.rank() == 1 && b.rank() == 1, "concat: rank-1 tensors only");
  Tensor c(a.size() + b.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) c[a.size() + i] = b[i];
  return c;
}

ConcatGrads concat_backward(size_t size_a, const Tensor& dc) {
  require(dc.rank() == 1 && dc.size() >= size_a, "concat_backward: bad split");
  ConcatGrads g{Tensor(size_a), Tensor(dc.size() - size_a)};
  for (size_t i = 0; i < size_a; ++i) g.da[i] = dc[i];
  for (size_t i = size_a; i < dc.size(); ++i) g.db[i - size_a] = dc[i];
  return g;
}

MaxPoolResult temporal_max_pool(const std::vector<Tensor>& series) {
  require(!series.empty(), "temporal_max_pool: empty series");
  const size_t dim = series[0].size();
  MaxPoolResult r{series[0], std::vector<size_t>(dim, 0)};
  for (size_t t = 1; t < series.size(); ++t) {
    require(series[t].size() == dim, "temporal_max_pool: ragged series");
    for (size_t d = 0; d < dim; ++d) {
      if (series[t][d] > r.out[d]) {  // strict: ties keep the earliest step
        r.out[d] = series[t][d];
        r.argmax[d] = t;
      }
    }
  }
  return r;
}

std::vector<Tensor> temporal_max_pool_backward(const MaxPoolResult& fwd,
                                               size_t series_len, size_t dim,
                                               const Tensor& dout) {
  require(dout.size() == dim && fwd.argmax.size() == dim,
          "temporal_max_pool_backward: dimension mismatch");
  std::vector<Tensor> dx(series_len, Tensor(dim));
  for (size_t d = 0; d < dim; ++d) dx[fwd.argmax[d]][d] = dout[d];
  return dx;
}

Tensor softmax(const Tensor& v) {
  require(v.rank() == 1 && v.size() > 0, "softmax: nonempty rank-1 input");
  double mx = v[0];
  for (size_t i = 1; i < v.size(); ++i) mx = std::max(mx, v[i]);
  Tensor y = v;
  double sum = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    y[i] = std::exp(v[i] - mx);
    sum += y[i];
  }
  for (size_t i = 0; i < v.size(); ++i) y[i] /= sum;
  return y;
}

Tensor softmax_backward(const Tensor& y, const Tensor& dy) {
  require_same_shape(y, dy, "softmax_backward");
  double dot = 0.0;
  for (size_t i = 0; i < y.size(); ++i) dot += dy[i] * y[i];
  Tensor dz = y;
  for (size_t i = 0; i < y.size(); ++i) dz[i] = y[i] * (dy[i] - dot);
  return dz;
}

double cosine(const Tensor& p, const Tensor& q) {
  require_same_shape(p, q, "cosine");
  double dot = 0.0, np = 0.0, nq = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    dot += p[i] * q[i];
    np += p[i] * p[i];
    nq += q[i] * q[i];
  }
  if (np == 0.0 || nq == 0.0) throw std::invalid_argument("cosine: zero-norm input");
  return dot / (std::sqrt(np) * std::sqrt(nq));
}

CosineGrads cosine_backward(const Tensor& p, const Tensor& q, double ds) {
  require_same_shape(p, q, "cosine_backward");
  double dot = 0.0, np2 = 0.0, nq2 = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    dot += p[i] * q[i];
    np2 += p[i] * p[i];
    nq2 += q[i] * q[i];
  }
  if (np2 == 0.0 || nq2 == 0.0)
    throw std::invalid_argument("cosine_backward: zero-norm input");
  const double np = std::sqrt(np2), nq = std::sqrt(nq2);
  const double s = dot / (np * nq);
  CosineGrads g{p, q};
  for (size_t i = 0; i < p.size(); ++i) {
    g.dp[i] = ds * (q[i] / (np * nq) - s * p[i] / np2);
    g.dq[i] = ds * (p[i] / (np * nq) - s * q[i] / nq2);
  }
  return g;
}

double se_cost(double similarity, int label) {
  const double d = similarity - double(label);
  return d * d;
}

double se_cost_backward(double similarity, int label) {
  return 2.0 * (similarity - double(label));
}

void matvec(const Tensor& w, const double* x, double* y) {
  const size_t m = w.rows(), n = w.cols();
  for (size_t r = 0; r < m; ++r) {
    const double* wr = w.row(r);
    double acc = 0.0;
    for (size_t c = 0; c < n; ++c) acc += wr[c] * x[c];
    y[r] = acc;
  }
}

void matvec_acc(const Tensor& w, const double* x, double* y) {
  const size_t m = w.rows(), n = w.cols();
  for (size_t r = 0; r < m; ++r) {
    const double* wr = w.row(r);
    double acc = 0.0;
    for (size_t c = 0; c < n; ++c) acc += wr[c] * x[c];
    y[r] += acc;
  }
}

void matvec_t_acc(const Tensor& w, const double* a, double* dx) {
  const size_t m = w.rows(), n = w.cols();
  for (size_t r = 0; r < m; ++r) {
    const double* wr = w.row(r);
    const double av = a[r];
    for (size_t c = 0; c < n; ++c) dx[c] += wr[c] * av;
  }
}

void outer_acc(Tensor& dw, const double* a, const double* x) {
  const size_t m = dw.rows(), n = dw.cols();
  for (size_t r = 0; r < m; ++r) {
    double* dwr = dw.row(r);
    const double av = a[r];
    for (size_t c = 0; c < n; ++c) dwr[c] += av * x[c];
  }
}

}  // namespace pairclust::diffcore
