#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "absa/core/tape.hpp"
#include "absa/core/tensor.hpp"

// Differentiable operations over Var. Matrices are [rows x cols]; a rank 1
// tensor [n] acts as a 1 x n row, except as the right operand of matmul where
// it is a column. All outputs land on the inputs' tape.

namespace absa::core {

enum class Elementwise { add, mul, relu, sigmoid };

Var matmul(const Var& a, const Var& b);

/// Same-shape arithmetic, or a [cols] vector `b` broadcast over the rows of `a`.
Var add(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var relu(const Var& a);
Var sigmoid(const Var& a);
Var tanh(const Var& a);
/// Dispatches on `kind`; `b` is required for add/mul and ignored otherwise.
Var elementwise(Elementwise kind, const Var& a, const Var& b = {});

Var scale(const Var& a, double factor);
Var sum(const Var& a);
Var dot(const Var& a, const Var& b);
Var cosine_similarity(const Var& a, const Var& b);

/// Numerically stable softmax over a rank 1 tensor.
Var softmax(const Var& a);
/// log(max(a, floor)); gradient is zero where the floor is active.
Var log(const Var& a, double floor = 1e-300);
Var pick(const Var& a, std::size_t index);

/// Coordinate-wise max over rows; ties route gradient to the lowest row.
Var maxpool_rows(const Var& a);
Var mean_rows(const Var& a);
Var slice_rows(const Var& a, std::size_t from, std::size_t to);
Var concat(const Var& a, const Var& b);

/// x W^T + b with W [out x in], b [out]; x is [in] or [n x in].
Var linear(const Var& x, const Var& weight, const Var& bias);
Var gather_rows(const Var& table, std::span<const std::size_t> indices);
/// Row i of the output is the mean of rows `neighbors[i]` of `h` (zeros for an empty set).
Var aggregate_neighbors(const Var& h, const std::vector<std::vector<std::size_t>>& neighbors);

/// sum_i p_i log(p_i / max(q_i, floor)) with `p` a constant target; terms with p_i = 0 vanish.
Var kl_divergence(const Tensor& p, const Var& q, double floor = 1e-12);

/// Plain (tape-free) stable softmax, shared by data-side code.
Tensor softmax_values(std::span<const double> x);
double sigmoid_value(double x) noexcept;

}  // namespace absa::core
