#include "absa/core/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "absa/core/error.hpp"
#include "absa/core/kernels.hpp"

namespace absa::core {
namespace {

const kernels::KernelTable& K() { return kernels::active(); }

Tape& tape_of(const Var& a) {
  if (!a.valid()) throw ArgumentError("operation on an empty Var");
  return *a.tape();
}

Tape& tape_of(const Var& a, const Var& b) {
  Tape& t = tape_of(a);
  if (b.tape() != &t) throw ArgumentError("operands live on different tapes");
  return t;
}

std::string pair_shapes(const Tensor& a, const Tensor& b) {
  return shape_string(a.shape()) + " and " + shape_string(b.shape());
}

enum class Broadcast { same, row };

Broadcast binary_layout(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() == b.shape()) return Broadcast::same;
  if (a.rank() == 2 && b.rank() == 1 && b.cols() == a.cols()) return Broadcast::row;
  throw DimensionError(std::string(op) + ": shapes " + pair_shapes(a, b) + " are not broadcastable");
}

void col_sums_into(const Tensor& g, Tensor& out) {
  for (std::size_t r = 0; r < g.rows(); ++r) K().add(out.data().data(), g.row(r).data(), out.data().data(), g.cols());
}

}  // namespace

double sigmoid_value(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Tensor softmax_values(std::span<const double> x) {
  if (x.empty()) throw ArgumentError("softmax of an empty vector");
  const double m = *std::max_element(x.begin(), x.end());
  std::vector<double> out(x.size());
  double z = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::exp(x[i] - m);
    z += out[i];
  }
  for (auto& v : out) v /= z;
  return Tensor::vector(std::move(out));
}

Var matmul(const Var& a, const Var& b) {
  Tape& t = tape_of(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  const std::size_t m = av.rows();
  const std::size_t k = av.cols();
  const std::size_t kb = bv.rank() == 1 ? bv.size() : bv.rows();
  const std::size_t n = bv.rank() == 1 ? 1 : bv.cols();
  if (k != kb) throw DimensionError("matmul: inner dimensions differ for " + pair_shapes(av, bv));

  Shape out_shape;
  if (av.rank() == 2 && bv.rank() == 2) out_shape = {m, n};
  else if (av.rank() == 2) out_shape = {m};
  else if (bv.rank() == 2) out_shape = {n};
  else out_shape = {1};

  Tensor out(out_shape);
  const double* A = av.data().data();
  const double* B = bv.data().data();
  double* C = out.data().data();
  for (std::size_t i = 0; i < m; ++i) {
    if (n == 1) {
      C[i] = K().dot(A + i * k, B, k);
    } else {
      for (std::size_t p = 0; p < k; ++p) K().axpy(A[i * k + p], B + p * n, C + i * n, n);
    }
  }

  const std::size_t ia = a.id(), ib = b.id();
  return t.record("matmul", std::move(out), {a, b}, [ia, ib, m, k, n](Tape& tp, const Tensor& g) {
    const double* A = tp.value(ia).data().data();
    const double* B = tp.value(ib).data().data();
    const double* G = g.data().data();
    if (tp.requires_grad(ia)) {
      double* dA = tp.grad(ia).data().data();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) dA[i * k + p] += K().dot(G + i * n, B + p * n, n);
    }
    if (tp.requires_grad(ib)) {
      double* dB = tp.grad(ib).data().data();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) K().axpy(A[i * k + p], G + i * n, dB + p * n, n);
    }
  });
}

Var add(const Var& a, const Var& b) {
  Tape& t = tape_of(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  const Broadcast layout = binary_layout("add", av, bv);
  Tensor out(av.shape());
  if (layout == Broadcast::same) {
    K().add(av.data().data(), bv.data().data(), out.data().data(), av.size());
  } else {
    for (std::size_t r = 0; r < av.rows(); ++r) K().add(av.row(r).data(), bv.data().data(), out.row(r).data(), av.cols());
  }
  const std::size_t ia = a.id(), ib = b.id();
  return t.record("add", std::move(out), {a, b}, [ia, ib, layout](Tape& tp, const Tensor& g) {
    if (tp.requires_grad(ia)) {
      Tensor& da = tp.grad(ia);
      K().add(da.data().data(), g.data().data(), da.data().data(), g.size());
    }
    if (tp.requires_grad(ib)) {
      Tensor& db = tp.grad(ib);
      if (layout == Broadcast::same) K().add(db.data().data(), g.data().data(), db.data().data(), g.size());
      else col_sums_into(g, db);
    }
  });
}

Var mul(const Var& a, const Var& b) {
  Tape& t = tape_of(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  const Broadcast layout = binary_layout("mul", av, bv);
  Tensor out(av.shape());
  if (layout == Broadcast::same) {
    K().mul(av.data().data(), bv.data().data(), out.data().data(), av.size());
  } else {
    for (std::size_t r = 0; r < av.rows(); ++r) K().mul(av.row(r).data(), bv.data().data(), out.row(r).data(), av.cols());
  }
  const std::size_t ia = a.id(), ib = b.id();
  return t.record("mul", std::move(out), {a, b}, [ia, ib, layout](Tape& tp, const Tensor& g) {
    const Tensor& av = tp.value(ia);
    const Tensor& bv = tp.value(ib);
    if (tp.requires_grad(ia)) {
      Tensor& da = tp.grad(ia);
      if (layout == Broadcast::same) {
        K().mul_add(g.data().data(), bv.data().data(), da.data().data(), g.size());
      } else {
        for (std::size_t r = 0; r < g.rows(); ++r) K().mul_add(g.row(r).data(), bv.data().data(), da.row(r).data(), g.cols());
      }
    }
    if (tp.requires_grad(ib)) {
      Tensor& db = tp.grad(ib);
      if (layout == Broadcast::same) {
        K().mul_add(g.data().data(), av.data().data(), db.data().data(), g.size());
      } else {
        for (std::size_t r = 0; r < g.rows(); ++r) K().mul_add(g.row(r).data(), av.row(r).data(), db.data().data(), g.cols());
      }
    }
  });
}

Var relu(const Var& a) {
  Tape& t = tape_of(a);
  const Tensor& av = a.value();
  Tensor out(av.shape());
  K().relu(av.data().data(), out.data().data(), av.size());
  const std::size_t ia = a.id(), self = t.size();
  return t.record("relu", std::move(out), {a}, [ia, self](Tape& tp, const Tensor& g) {
    K().relu_backward(tp.value(self).data().data(), g.data().data(), tp.grad(ia).data().data(), g.size());
  });
}

Var sigmoid(const Var& a) {
  Tape& t = tape_of(a);
  const Tensor& av = a.value();
  Tensor out(av.shape());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = sigmoid_value(av[i]);
  const std::size_t ia = a.id(), self = t.size();
  return t.record("sigmoid", std::move(out), {a}, [ia, self](Tape& tp, const Tensor& g) {
    const Tensor& y = tp.value(self);
    Tensor& da = tp.grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) da[i] += g[i] * y[i] * (1.0 - y[i]);
  });
}

Var tanh(const Var& a) {
  Tape& t = tape_of(a);
  const Tensor& av = a.value();
  Tensor out(av.shape());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = std::tanh(av[i]);
  const std::size_t ia = a.id(), self = t.size();
  return t.record("tanh", std::move(out), {a}, [ia, self](Tape& tp, const Tensor& g) {
    const Tensor& y = tp.value(self);
    Tensor& da = tp.grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) da[i] += g[i] * (1.0 - y[i] * y[i]);
  });
}

Var elementwise(Elementwise kind, const Var& a, const Var& b) {
  switch (kind) {
    case Elementwise::add:
      return add(a, b);
    case Elementwise::mul:
      return mul(a, b);
    case Elementwise::relu:
      return relu(a);
    case Elementwise::sigmoid:
      return sigmoid(a);
  }
  throw ArgumentError("unknown elementwise kind");
}

Var scale(const Var& a, double factor) {
  Tape& t = tape_of(a);
  const Tensor& av = a.value();
  Tensor out(av.shape());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = av[i] * factor;
  const std::size_t ia = a.id();
  return t.record("scale", std::move(out), {a}, [ia, factor](Tape& tp, const Tensor& g) {
    K().axpy(factor, g.data().data(), tp.grad(ia).data().data(), g.size());
  });
}

Var sum(const Var& a) {
  Tape& t = tape_of(a);
  const Tensor& av = a.value();
  double s = 0.0;
  for (double v : av.data()) s += v;
  const std::size_t ia = a.id();
  return t.record("sum", Tensor::scalar(s), {a}, [ia](Tape& tp, const Tensor& g) {
    Tensor& da = tp.grad(ia);
    for (auto& v : da.data()) v += g[0];
  });
}

Var dot(const Var& a, const Var& b) {
  Tape& t = tape_of(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.size() != bv.size()) throw DimensionError("dot: lengths differ for " + pair_shapes(av, bv));
  const double s = K().dot(av.data().data(), bv.data().data(), av.size());
  const std::size_t ia = a.id(), ib = b.id();
  return t.record("dot", Tensor::scalar(s), {a, b}, [ia, ib](Tape& tp, const Tensor& g) {
    const std::size_t n = tp.value(ia).size();
    if (tp.requires_grad(ia)) K().axpy(g[0], tp.value(ib).data().data(), tp.grad(ia).data().data(), n);
    if (tp.requires_grad(ib)) K().axpy(g[0], tp.value(ia).data().data(), tp.grad(ib).data().data(), n);
  });
}

Var cosine_similarity(const Var& a, const Var& b) {
  Tape& t = tape_of(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.size() != bv.size()) throw DimensionError("cosine_similarity: lengths differ for " + pair_shapes(av, bv));
  constexpr double kEps = 1e-12;
  const std::size_t n = av.size();
  const double ab = K().dot(av.data().data(), bv.data().data(), n);
  const double na = std::sqrt(K().dot(av.data().data(), av.data().data(), n));
  const double nb = std::sqrt(K().dot(bv.data().data(), bv.data().data(), n));
  const double denom = std::max(na * nb, kEps);
  const std::size_t ia = a.id(), ib = b.id();
  return t.record("cosine", Tensor::scalar(ab / denom), {a, b}, [=](Tape& tp, const Tensor& g) {
    const Tensor& x = tp.value(ia);
    const Tensor& y = tp.value(ib);
    const bool clamped = na * nb < kEps;
    // d/dx (x.y / (|x||y|)) = y / D - (x.y) x / (|x|^2 D)
    if (tp.requires_grad(ia)) {
      Tensor& dx = tp.grad(ia);
      for (std::size_t i = 0; i < n; ++i) {
        double d = y[i] / denom;
        if (!clamped) d -= ab * x[i] / (na * na * denom);
        dx[i] += g[0] * d;
      }
    }
    if (tp.requires_grad(ib)) {
      Tensor& dy = tp.grad(ib);
      for (std::size_t i = 0; i < n; ++i) {
        double d = x[i] / denom;
        if (!clamped) d -= ab * y[i] / (nb * nb * denom);
        dy[i] += g[0] * d;
      }
    }
  });
}

Var softmax(const Var& a) {
  Tape& t = tape_of(a);
  const Tensor& av = a.value();
  if (av.rank() != 1) throw DimensionError("softmax expects a vector, got " + shape_string(av.shape()));
  Tensor out = softmax_values(av.data());
  const std::size_t ia = a.id(), self = t.size();
  return t.record("softmax", std::move(out), {a}, [ia, self](Tape& tp, const Tensor& g) {
    const Tensor& y = tp.value(self);
    const double gy = K().dot(g.data().data(), y.data().data(), y.size());
    Tensor& da = tp.grad(ia);
    for (std::size_t i = 0; i < y.size(); ++i) da[i] += y[i] * (g[i] - gy);
  });
}

Var log(const Var& a, double floor) {
  Tape& t = tape_of(a);
  const Tensor& av = a.value();
  Tensor out(av.shape());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = std::log(std::max(av[i], floor));
  const std::size_t ia = a.id();
  return t.record("log", std::move(out), {a}, [ia, floor](Tape& tp, const Tensor& g) {
    const Tensor& x = tp.value(ia);
    Tensor& da = tp.grad(ia);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] > floor) da[i] += g[i] / x[i];
    }
  });
}

Var pick(const Var& a, std::size_t index) {
  Tape& t = tape_of(a);
  const Tensor& av = a.value();
  if (index >= av.size()) {
    throw ArgumentError("pick: index " + std::to_string(index) + " out of range for " + shape_string(av.shape()));
  }
  const std::size_t ia = a.id();
  return t.record("pick", Tensor::scalar(av[index]), {a}, [ia, index](Tape& tp, const Tensor& g) {
    tp.grad(ia)[index] += g[0];
  });
}

Var maxpool_rows(const Var& a) {
  Tape& t = tape_of(a);
  const Tensor& av = a.value();
  const std::size_t rows = av.rows(), cols = av.cols();
  if (rows == 0) throw ArgumentError("maxpool_rows over an empty row set");
  Tensor out({cols});
  std::vector<std::size_t> argmax(cols, 0);
  for (std::size_t c = 0; c < cols; ++c) out[c] = av(0, c);
  for (std::size_t r = 1; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (av(r, c) > out[c]) {
        out[c] = av(r, c);
        argmax[c] = r;
      }
    }
  }
  const std::size_t ia = a.id();
  return t.record("maxpool_rows", std::move(out), {a}, [ia, argmax = std::move(argmax)](Tape& tp, const Tensor& g) {
    Tensor& da = tp.grad(ia);
    const std::size_t cols = g.size();
    for (std::size_t c = 0; c < cols; ++c) da[argmax[c] * cols + c] += g[c];
  });
}

Var mean_rows(const Var& a) {
  Tape& t = tape_of(a);
  const Tensor& av = a.value();
  const std::size_t rows = av.rows(), cols = av.cols();
  if (rows == 0) throw ArgumentError("mean_rows over an empty row set");
  Tensor out({cols});
  const double w = 1.0 / static_cast<double>(rows);
  for (std::size_t r = 0; r < rows; ++r) K().axpy(w, av.row(r).data(), out.data().data(), cols);
  const std::size_t ia = a.id();
  return t.record("mean_rows", std::move(out), {a}, [ia, w](Tape& tp, const Tensor& g) {
    Tensor& da = tp.grad(ia);
    for (std::size_t r = 0; r < da.rows(); ++r) K().axpy(w, g.data().data(), da.row(r).data(), g.size());
  });
}

Var slice_rows(const Var& a, std::size_t from, std::size_t to) {
  Tape& t = tape_of(a);
  const Tensor& av = a.value();
  if (from >= to || to > av.rows()) {
    throw ArgumentError("slice_rows: [" + std::to_string(from) + ", " + std::to_string(to) + ") invalid for " +
                        shape_string(av.shape()));
  }
  const std::size_t cols = av.cols();
  Shape shape = av.rank() == 2 ? Shape{to - from, cols} : Shape{cols};
  std::vector<double> vals(av.data().begin() + from * cols, av.data().begin() + to * cols);
  const std::size_t ia = a.id();
  return t.record("slice_rows", Tensor(shape, std::move(vals)), {a}, [ia, from, cols](Tape& tp, const Tensor& g) {
    Tensor& da = tp.grad(ia);
    K().add(da.data().data() + from * cols, g.data().data(), da.data().data() + from * cols, g.size());
  });
}

Var concat(const Var& a, const Var& b) {
  Tape& t = tape_of(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.rank() != 1 || bv.rank() != 1) throw DimensionError("concat expects vectors, got " + pair_shapes(av, bv));
  std::vector<double> vals(av.data().begin(), av.data().end());
  vals.insert(vals.end(), bv.data().begin(), bv.data().end());
  const std::size_t ia = a.id(), ib = b.id(), na = av.size();
  return t.record("concat", Tensor::vector(std::move(vals)), {a, b}, [ia, ib, na](Tape& tp, const Tensor& g) {
    if (tp.requires_grad(ia)) {
      Tensor& da = tp.grad(ia);
      K().add(da.data().data(), g.data().data(), da.data().data(), na);
    }
    if (tp.requires_grad(ib)) {
      Tensor& db = tp.grad(ib);
      K().add(db.data().data(), g.data().data() + na, db.data().data(), db.size());
    }
  });
}

Var linear(const Var& x, const Var& weight, const Var& bias) {
  Tape& t = tape_of(x, weight);
  if (bias.tape() != &t) throw ArgumentError("operands live on different tapes");
  const Tensor& xv = x.value();
  const Tensor& wv = weight.value();
  const Tensor& bv = bias.value();
  if (wv.rank() != 2 || xv.cols() != wv.cols()) {
    throw DimensionError("linear: input " + shape_string(xv.shape()) + " does not fit weight " + shape_string(wv.shape()));
  }
  const std::size_t n = xv.rows(), in = wv.cols(), out_dim = wv.rows();
  if (bv.rank() != 1 || bv.size() != out_dim) {
    throw DimensionError("linear: bias " + shape_string(bv.shape()) + " does not fit weight " + shape_string(wv.shape()));
  }
  Tensor out(xv.rank() == 2 ? Shape{n, out_dim} : Shape{out_dim});
  for (std::size_t r = 0; r < n; ++r) {
    const double* xr = xv.row(r).data();
    for (std::size_t o = 0; o < out_dim; ++o) out[r * out_dim + o] = K().dot(xr, wv.row(o).data(), in) + bv[o];
  }
  const std::size_t ix = x.id(), iw = weight.id(), ib = bias.id();
  return t.record("linear", std::move(out), {x, weight, bias}, [ix, iw, ib, n, in, out_dim](Tape& tp, const Tensor& g) {
    const Tensor& xv = tp.value(ix);
    const Tensor& wv = tp.value(iw);
    if (tp.requires_grad(ix)) {
      Tensor& dx = tp.grad(ix);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t o = 0; o < out_dim; ++o) K().axpy(g[r * out_dim + o], wv.row(o).data(), dx.row(r).data(), in);
    }
    if (tp.requires_grad(iw)) {
      Tensor& dw = tp.grad(iw);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t o = 0; o < out_dim; ++o) K().axpy(g[r * out_dim + o], xv.row(r).data(), dw.row(o).data(), in);
    }
    if (tp.requires_grad(ib)) {
      Tensor& db = tp.grad(ib);
      for (std::size_t r = 0; r < n; ++r) K().add(db.data().data(), g.data().data() + r * out_dim, db.data().data(), out_dim);
    }
  });
}

Var gather_rows(const Var& table, std::span<const std::size_t> indices) {
  Tape& t = tape_of(table);
  const Tensor& tv = table.value();
  if (tv.rank() != 2) throw DimensionError("gather_rows expects a matrix, got " + shape_string(tv.shape()));
  if (indices.empty()) throw ArgumentError("gather_rows with no indices");
  const std::size_t cols = tv.cols();
  Tensor out({indices.size(), cols});
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= tv.rows()) {
      throw ArgumentError("gather_rows: index " + std::to_string(indices[r]) + " out of range for " +
                          shape_string(tv.shape()));
    }
    std::copy_n(tv.row(indices[r]).begin(), cols, out.row(r).begin());
  }
  const std::size_t it = table.id();
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  return t.record("gather_rows", std::move(out), {table}, [it, idx = std::move(idx), cols](Tape& tp, const Tensor& g) {
    Tensor& dt = tp.grad(it);
    for (std::size_t r = 0; r < idx.size(); ++r) K().add(dt.row(idx[r]).data(), g.row(r).data(), dt.row(idx[r]).data(), cols);
  });
}

Var aggregate_neighbors(const Var& h, const std::vector<std::vector<std::size_t>>& neighbors) {
  Tape& t = tape_of(h);
  const Tensor& hv = h.value();
  const std::size_t n = hv.rows(), cols = hv.cols();
  if (hv.rank() != 2 || neighbors.size() != n) {
    throw DimensionError("aggregate_neighbors: " + std::to_string(neighbors.size()) + " neighbor sets for " +
                         shape_string(hv.shape()));
  }
  Tensor out({n, cols});
  for (std::size_t i = 0; i < n; ++i) {
    if (neighbors[i].empty()) continue;
    const double w = 1.0 / static_cast<double>(neighbors[i].size());
    for (std::size_t j : neighbors[i]) {
      if (j >= n) throw ArgumentError("aggregate_neighbors: neighbor index out of range");
      K().axpy(w, hv.row(j).data(), out.row(i).data(), cols);
    }
  }
  const std::size_t ih = h.id();
  return t.record("aggregate_neighbors", std::move(out), {h}, [ih, neighbors, cols](Tape& tp, const Tensor& g) {
    Tensor& dh = tp.grad(ih);
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
      if (neighbors[i].empty()) continue;
      const double w = 1.0 / static_cast<double>(neighbors[i].size());
      for (std::size_t j : neighbors[i]) K().axpy(w, g.row(i).data(), dh.row(j).data(), cols);
    }
  });
}

Var kl_divergence(const Tensor& p, const Var& q, double floor) {
  Tape& t = tape_of(q);
  const Tensor& qv = q.value();
  if (p.size() != qv.size()) throw DimensionError("kl_divergence: lengths differ for " + pair_shapes(p, qv));
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) s += p[i] * (std::log(p[i]) - std::log(std::max(qv[i], floor)));
  }
  const std::size_t iq = q.id();
  return t.record("kl_divergence", Tensor::scalar(s), {q}, [iq, p, floor](Tape& tp, const Tensor& g) {
    const Tensor& qv = tp.value(iq);
    Tensor& dq = tp.grad(iq);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] > 0.0 && qv[i] > floor) dq[i] -= g[0] * p[i] / qv[i];
    }
  });
}

}  // namespace absa::core
