#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "lhgat/diff/tape.hpp"

// Differentiable primitives. Every function records one node on the tape of
// its first argument; all operands must live on the same tape.
namespace lhgat::diff {

// Rank-2 matrix product [m,k] x [k,n] -> [m,n].
Var matmul(Var a, Var b);
// Rank-2 transpose.
Var transpose(Var a);

// Elementwise binary ops with numpy-style broadcasting over equal-rank shapes
// (each dimension equal or 1).
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
// Elementwise maximum; ties route the gradient to `a`.
Var maximum(Var a, Var b);

Var scale(Var a, double factor);
Var add_scalar(Var a, double c);

Var tanh(Var a);
Var sigmoid(Var a);
Var elu(Var a, double alpha = 1.0);
Var leaky_relu(Var a, double slope);
Var relu(Var a);
Var exp(Var a);
Var log(Var a);

// Concatenation along `axis`; all other dimensions must agree.
Var concat(const std::vector<Var>& parts, std::size_t axis);
// Contiguous range [begin, begin + length) along `axis`.
Var slice(Var a, std::size_t axis, std::size_t begin, std::size_t length);
// Rows of a rank-2 tensor, in the given order (repeats allowed).
Var gather_rows(Var table, const std::vector<std::size_t>& rows);
// Elements (r, c) of a rank-2 tensor, as a [count] vector.
Var pick(Var a, const std::vector<std::pair<std::size_t, std::size_t>>& cells);
Var reshape(Var a, Shape shape);

// Normalizes along `axis`. Max-subtracted.
Var softmax(Var a, std::size_t axis);
// log(sum(exp(a))) along `axis`, keeping that axis with size 1. Max-subtracted.
Var log_sum_exp(Var a, std::size_t axis);

// Full reduction to a rank-0 scalar.
Var sum(Var a);
Var mean(Var a);
// Reduction along `axis`, keeping that axis with size 1.
Var sum(Var a, std::size_t axis);

}  // namespace lhgat::diff
