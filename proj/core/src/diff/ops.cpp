#include "lhgat/diff/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lhgat/errors.hpp"

namespace lhgat::diff {
namespace {

void require_rank(const Tensor& t, std::size_t rank, const char* op) {
  if (t.rank() != rank) {
    throw DimensionError(std::string(op) + ": expected rank " + std::to_string(rank) +
                         ", got shape " + to_string(t.shape));
  }
}

void require_axis(const Tensor& t, std::size_t axis, const char* op) {
  if (axis >= t.rank()) {
    throw DimensionError(std::string(op) + ": axis " + std::to_string(axis) +
                         " out of range for shape " + to_string(t.shape));
  }
}

// Splits a shape around `axis` into (outer, axis extent, inner) so that element
// (o, k, i) lives at (o * extent + k) * inner + i.
struct AxisView {
  std::size_t outer = 1;
  std::size_t extent = 1;
  std::size_t inner = 1;

  AxisView(const Shape& shape, std::size_t axis) {
    for (std::size_t d = 0; d < axis; ++d) outer *= shape[d];
    extent = shape[axis];
    for (std::size_t d = axis + 1; d < shape.size(); ++d) inner *= shape[d];
  }

  std::size_t index(std::size_t o, std::size_t k, std::size_t i) const {
    return (o * extent + k) * inner + i;
  }
};

// For each element of the broadcast output, the flat index into each operand.
struct Broadcast {
  Shape shape;
  std::vector<std::size_t> a_index;
  std::vector<std::size_t> b_index;
};

std::vector<std::size_t> broadcast_index(const Shape& out, const Shape& in) {
  const std::size_t rank = out.size();
  std::vector<std::size_t> in_stride(rank, 0);
  std::size_t stride = 1;
  for (std::size_t d = rank; d-- > 0;) {
    in_stride[d] = in[d] == 1 ? 0 : stride;
    stride *= in[d];
  }
  const std::size_t n = num_elements(out);
  std::vector<std::size_t> index(n);
  std::vector<std::size_t> pos(rank, 0);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t k = 0;
    for (std::size_t d = 0; d < rank; ++d) k += pos[d] * in_stride[d];
    index[flat] = k;
    for (std::size_t d = rank; d-- > 0;) {
      if (++pos[d] < out[d]) break;
      pos[d] = 0;
    }
  }
  return index;
}

Broadcast broadcast(const Tensor& a, const Tensor& b, const char* op) {
  if (a.rank() != b.rank()) {
    throw DimensionError(std::string(op) + ": incompatible shapes " + to_string(a.shape) +
                         " and " + to_string(b.shape));
  }
  Broadcast bc;
  bc.shape.resize(a.rank());
  for (std::size_t d = 0; d < a.rank(); ++d) {
    const std::size_t x = a.shape[d];
    const std::size_t y = b.shape[d];
    if (x != y && x != 1 && y != 1) {
      throw DimensionError(std::string(op) + ": incompatible shapes " + to_string(a.shape) +
                           " and " + to_string(b.shape));
    }
    bc.shape[d] = std::max(x, y);
  }
  bc.a_index = broadcast_index(bc.shape, a.shape);
  bc.b_index = broadcast_index(bc.shape, b.shape);
  return bc;
}

// Records an elementwise binary op. `fwd(x, y)` gives the value; `dx(x, y, z)` and
// `dy(x, y, z)` give the partial derivatives given the output z.
template <typename Fwd, typename Dx, typename Dy>
Var binary(Var a, Var b, const char* op, Fwd fwd, Dx dx, Dy dy) {
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  Broadcast bc = broadcast(x, y, op);
  Tensor out = Tensor::zeros(bc.shape);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out.data[k] = fwd(x.data[bc.a_index[k]], y.data[bc.b_index[k]]);
  }
  auto ai = std::move(bc.a_index);
  auto bi = std::move(bc.b_index);
  return a.tape().record(
      std::move(out), {a, b},
      [ai = std::move(ai), bi = std::move(bi), dx, dy](const BackwardContext& ctx) {
        const auto& xv = ctx.inputs[0]->data;
        const auto& yv = ctx.inputs[1]->data;
        for (std::size_t k = 0; k < ctx.grad_output.size(); ++k) {
          const double g = ctx.grad_output[k];
          const double xk = xv[ai[k]];
          const double yk = yv[bi[k]];
          const double zk = ctx.output.data[k];
          if (ctx.input_grads[0]) (*ctx.input_grads[0])[ai[k]] += g * dx(xk, yk, zk);
          if (ctx.input_grads[1]) (*ctx.input_grads[1])[bi[k]] += g * dy(xk, yk, zk);
        }
      });
}

// Records an elementwise unary op; `deriv(x, z)` is the derivative given input x and output z.
template <typename Fwd, typename Deriv>
Var unary(Var a, Fwd fwd, Deriv deriv) {
  const Tensor& x = a.value();
  Tensor out = Tensor::zeros(x.shape);
  for (std::size_t k = 0; k < out.size(); ++k) out.data[k] = fwd(x.data[k]);
  return a.tape().record(std::move(out), {a}, [deriv](const BackwardContext& ctx) {
    auto& gx = *ctx.input_grads[0];
    const auto& xv = ctx.inputs[0]->data;
    for (std::size_t k = 0; k < ctx.grad_output.size(); ++k) {
      gx[k] += ctx.grad_output[k] * deriv(xv[k], ctx.output.data[k]);
    }
  });
}

}  // namespace

Var matmul(Var a, Var b) {
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  require_rank(x, 2, "matmul");
  require_rank(y, 2, "matmul");
  if (x.cols() != y.rows()) {
    throw DimensionError("matmul: inner dimensions disagree for " + to_string(x.shape) + " x " +
                         to_string(y.shape));
  }
  const std::size_t m = x.rows();
  const std::size_t k = x.cols();
  const std::size_t n = y.cols();
  Tensor out = Tensor::zeros({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    double* row = &out.data[i * n];
    for (std::size_t p = 0; p < k; ++p) {
      const double xv = x.data[i * k + p];
      if (xv == 0.0) continue;
      const double* yrow = &y.data[p * n];
      for (std::size_t j = 0; j < n; ++j) row[j] += xv * yrow[j];
    }
  }
  return a.tape().record(std::move(out), {a, b}, [m, k, n](const BackwardContext& ctx) {
    const auto& g = ctx.grad_output;
    const auto& xv = ctx.inputs[0]->data;
    const auto& yv = ctx.inputs[1]->data;
    if (auto* gx = ctx.input_grads[0]) {
      // dX = G Y^T
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          double acc = 0.0;
          for (std::size_t j = 0; j < n; ++j) acc += g[i * n + j] * yv[p * n + j];
          (*gx)[i * k + p] += acc;
        }
      }
    }
    if (auto* gy = ctx.input_grads[1]) {
      // dY = X^T G
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          const double xv_ip = xv[i * k + p];
          if (xv_ip == 0.0) continue;
          for (std::size_t j = 0; j < n; ++j) (*gy)[p * n + j] += xv_ip * g[i * n + j];
        }
      }
    }
  });
}

Var transpose(Var a) {
  const Tensor& x = a.value();
  require_rank(x, 2, "transpose");
  const std::size_t r = x.rows();
  const std::size_t c = x.cols();
  Tensor out = Tensor::zeros({c, r});
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) out.data[j * r + i] = x.data[i * c + j];
  }
  return a.tape().record(std::move(out), {a}, [r, c](const BackwardContext& ctx) {
    auto& gx = *ctx.input_grads[0];
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) gx[i * c + j] += ctx.grad_output[j * r + i];
    }
  });
}

Var add(Var a, Var b) {
  return binary(
      a, b, "add", [](double x, double y) { return x + y; },
      [](double, double, double) { return 1.0; }, [](double, double, double) { return 1.0; });
}

Var sub(Var a, Var b) {
  return binary(
      a, b, "sub", [](double x, double y) { return x - y; },
      [](double, double, double) { return 1.0; }, [](double, double, double) { return -1.0; });
}

Var mul(Var a, Var b) {
  return binary(
      a, b, "mul", [](double x, double y) { return x * y; },
      [](double, double y, double) { return y; }, [](double x, double, double) { return x; });
}

Var maximum(Var a, Var b) {
  return binary(
      a, b, "maximum", [](double x, double y) { return x >= y ? x : y; },
      [](double x, double y, double) { return x >= y ? 1.0 : 0.0; },
      [](double x, double y, double) { return x >= y ? 0.0 : 1.0; });
}

Var scale(Var a, double factor) {
  return unary(
      a, [factor](double x) { return factor * x; }, [factor](double, double) { return factor; });
}

Var add_scalar(Var a, double c) {
  return unary(
      a, [c](double x) { return x + c; }, [](double, double) { return 1.0; });
}

Var tanh(Var a) {
  return unary(
      a, [](double x) { return std::tanh(x); }, [](double, double z) { return 1.0 - z * z; });
}

Var sigmoid(Var a) {
  return unary(
      a,
      [](double x) {
        if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double z) { return z * (1.0 - z); });
}

Var elu(Var a, double alpha) {
  return unary(
      a, [alpha](double x) { return x > 0 ? x : alpha * std::expm1(x); },
      [alpha](double x, double z) { return x > 0 ? 1.0 : z + alpha; });
}

Var leaky_relu(Var a, double slope) {
  return unary(
      a, [slope](double x) { return x > 0 ? x : slope * x; },
      [slope](double x, double) { return x > 0 ? 1.0 : slope; });
}

Var relu(Var a) {
  return unary(
      a, [](double x) { return x > 0 ? x : 0.0; },
      [](double x, double) { return x > 0 ? 1.0 : 0.0; });
}

Var exp(Var a) {
  return unary(
      a, [](double x) { return std::exp(x); }, [](double, double z) { return z; });
}

Var log(Var a) {
  for (double v : a.value().data) {
    if (!(v > 0)) throw ContractError("log: non-positive input");
  }
  return unary(
      a, [](double x) { return std::log(x); }, [](double x, double) { return 1.0 / x; });
}

Var concat(const std::vector<Var>& parts, std::size_t axis) {
  if (parts.empty()) throw ContractError("concat: no operands");
  const Tensor& first = parts.front().value();
  require_axis(first, axis, "concat");
  Shape shape = first.shape;
  shape[axis] = 0;
  std::vector<std::size_t> extents;
  for (const Var& p : parts) {
    const Tensor& t = p.value();
    if (t.rank() != first.rank()) {
      throw DimensionError("concat: incompatible shapes " + to_string(first.shape) + " and " +
                           to_string(t.shape));
    }
    for (std::size_t d = 0; d < t.rank(); ++d) {
      if (d != axis && t.shape[d] != first.shape[d]) {
        throw DimensionError("concat: incompatible shapes " + to_string(first.shape) + " and " +
                             to_string(t.shape));
      }
    }
    extents.push_back(t.shape[axis]);
    shape[axis] += t.shape[axis];
  }
  const AxisView view(shape, axis);
  Tensor out = Tensor::zeros(shape);
  std::size_t offset = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const Tensor& t = parts[p].value();
    const AxisView pv(t.shape, axis);
    for (std::size_t o = 0; o < pv.outer; ++o) {
      for (std::size_t k = 0; k < pv.extent; ++k) {
        std::copy_n(&t.data[pv.index(o, k, 0)], pv.inner, &out.data[view.index(o, offset + k, 0)]);
      }
    }
    offset += extents[p];
  }
  return parts.front().tape().record(
      std::move(out), parts, [view, extents](const BackwardContext& ctx) {
        std::size_t off = 0;
        for (std::size_t p = 0; p < extents.size(); ++p) {
          if (auto* g = ctx.input_grads[p]) {
            for (std::size_t o = 0; o < view.outer; ++o) {
              for (std::size_t k = 0; k < extents[p]; ++k) {
                for (std::size_t i = 0; i < view.inner; ++i) {
                  (*g)[(o * extents[p] + k) * view.inner + i] +=
                      ctx.grad_output[view.index(o, off + k, i)];
                }
              }
            }
          }
          off += extents[p];
        }
      });
}

Var slice(Var a, std::size_t axis, std::size_t begin, std::size_t length) {
  const Tensor& x = a.value();
  require_axis(x, axis, "slice");
  if (begin + length > x.shape[axis]) {
    throw DimensionError("slice: range [" + std::to_string(begin) + ", " +
                         std::to_string(begin + length) + ") exceeds shape " + to_string(x.shape));
  }
  const AxisView in(x.shape, axis);
  Shape shape = x.shape;
  shape[axis] = length;
  const AxisView outv(shape, axis);
  Tensor out = Tensor::zeros(shape);
  for (std::size_t o = 0; o < in.outer; ++o) {
    for (std::size_t k = 0; k < length; ++k) {
      std::copy_n(&x.data[in.index(o, begin + k, 0)], in.inner, &out.data[outv.index(o, k, 0)]);
    }
  }
  return a.tape().record(std::move(out), {a}, [in, outv, begin, length](const BackwardContext& ctx) {
    auto& gx = *ctx.input_grads[0];
    for (std::size_t o = 0; o < in.outer; ++o) {
      for (std::size_t k = 0; k < length; ++k) {
        for (std::size_t i = 0; i < in.inner; ++i) {
          gx[in.index(o, begin + k, i)] += ctx.grad_output[outv.index(o, k, i)];
        }
      }
    }
  });
}

Var gather_rows(Var table, const std::vector<std::size_t>& rows) {
  const Tensor& t = table.value();
  require_rank(t, 2, "gather_rows");
  const std::size_t c = t.cols();
  Tensor out = Tensor::zeros({rows.size(), c});
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= t.rows()) {
      throw DimensionError("gather_rows: row " + std::to_string(rows[r]) + " out of range for " +
                           to_string(t.shape));
    }
    std::copy_n(&t.data[rows[r] * c], c, &out.data[r * c]);
  }
  return table.tape().record(std::move(out), {table}, [rows, c](const BackwardContext& ctx) {
    auto& gx = *ctx.input_grads[0];
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t j = 0; j < c; ++j) gx[rows[r] * c + j] += ctx.grad_output[r * c + j];
    }
  });
}

Var pick(Var a, const std::vector<std::pair<std::size_t, std::size_t>>& cells) {
  const Tensor& x = a.value();
  require_rank(x, 2, "pick");
  const std::size_t c = x.cols();
  std::vector<std::size_t> flat;
  flat.reserve(cells.size());
  for (auto [r, col] : cells) {
    if (r >= x.rows() || col >= c) {
      throw DimensionError("pick: cell (" + std::to_string(r) + "," + std::to_string(col) +
                           ") out of range for " + to_string(x.shape));
    }
    flat.push_back(r * c + col);
  }
  Tensor out = Tensor::zeros({cells.size()});
  for (std::size_t k = 0; k < flat.size(); ++k) out.data[k] = x.data[flat[k]];
  return a.tape().record(std::move(out), {a}, [flat](const BackwardContext& ctx) {
    auto& gx = *ctx.input_grads[0];
    for (std::size_t k = 0; k < flat.size(); ++k) gx[flat[k]] += ctx.grad_output[k];
  });
}

Var reshape(Var a, Shape shape) {
  const Tensor& x = a.value();
  if (num_elements(shape) != x.size()) {
    throw DimensionError("reshape: cannot view " + to_string(x.shape) + " as " + to_string(shape));
  }
  Tensor out(std::move(shape), x.data);
  return a.tape().record(std::move(out), {a}, [](const BackwardContext& ctx) {
    auto& gx = *ctx.input_grads[0];
    for (std::size_t k = 0; k < gx.size(); ++k) gx[k] += ctx.grad_output[k];
  });
}

Var softmax(Var a, std::size_t axis) {
  const Tensor& x = a.value();
  require_axis(x, axis, "softmax");
  const AxisView v(x.shape, axis);
  Tensor out = Tensor::zeros(x.shape);
  for (std::size_t o = 0; o < v.outer; ++o) {
    for (std::size_t i = 0; i < v.inner; ++i) {
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < v.extent; ++k) mx = std::max(mx, x.data[v.index(o, k, i)]);
      double total = 0.0;
      for (std::size_t k = 0; k < v.extent; ++k) {
        const double e = std::exp(x.data[v.index(o, k, i)] - mx);
        out.data[v.index(o, k, i)] = e;
        total += e;
      }
      for (std::size_t k = 0; k < v.extent; ++k) out.data[v.index(o, k, i)] /= total;
    }
  }
  return a.tape().record(std::move(out), {a}, [v](const BackwardContext& ctx) {
    auto& gx = *ctx.input_grads[0];
    const auto& y = ctx.output.data;
    for (std::size_t o = 0; o < v.outer; ++o) {
      for (std::size_t i = 0; i < v.inner; ++i) {
        double dot = 0.0;
        for (std::size_t k = 0; k < v.extent; ++k) {
          dot += y[v.index(o, k, i)] * ctx.grad_output[v.index(o, k, i)];
        }
        for (std::size_t k = 0; k < v.extent; ++k) {
          const std::size_t idx = v.index(o, k, i);
          gx[idx] += y[idx] * (ctx.grad_output[idx] - dot);
        }
      }
    }
  });
}

Var log_sum_exp(Var a, std::size_t axis) {
  const Tensor& x = a.value();
  require_axis(x, axis, "log_sum_exp");
  const AxisView v(x.shape, axis);
  Shape shape = x.shape;
  shape[axis] = 1;
  Tensor out = Tensor::zeros(shape);
  for (std::size_t o = 0; o < v.outer; ++o) {
    for (std::size_t i = 0; i < v.inner; ++i) {
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < v.extent; ++k) mx = std::max(mx, x.data[v.index(o, k, i)]);
      double total = 0.0;
      if (std::isfinite(mx)) {
        for (std::size_t k = 0; k < v.extent; ++k) total += std::exp(x.data[v.index(o, k, i)] - mx);
        out.data[o * v.inner + i] = mx + std::log(total);
      } else {
        out.data[o * v.inner + i] = mx;
      }
    }
  }
  return a.tape().record(std::move(out), {a}, [v](const BackwardContext& ctx) {
    auto& gx = *ctx.input_grads[0];
    const auto& xv = ctx.inputs[0]->data;
    for (std::size_t o = 0; o < v.outer; ++o) {
      for (std::size_t i = 0; i < v.inner; ++i) {
        const double lse = ctx.output.data[o * v.inner + i];
        if (!std::isfinite(lse)) continue;
        const double g = ctx.grad_output[o * v.inner + i];
        for (std::size_t k = 0; k < v.extent; ++k) {
          const std::size_t idx = v.index(o, k, i);
          gx[idx] += g * std::exp(xv[idx] - lse);
        }
      }
    }
  });
}

Var sum(Var a) {
  const Tensor& x = a.value();
  double total = 0.0;
  for (double d : x.data) total += d;
  return a.tape().record(Tensor::scalar(total), {a}, [](const BackwardContext& ctx) {
    auto& gx = *ctx.input_grads[0];
    const double g = ctx.grad_output[0];
    for (double& d : gx) d += g;
  });
}

Var mean(Var a) {
  const std::size_t n = a.value().size();
  if (n == 0) throw ContractError("mean of an empty tensor");
  return scale(sum(a), 1.0 / static_cast<double>(n));
}

Var sum(Var a, std::size_t axis) {
  const Tensor& x = a.value();
  require_axis(x, axis, "sum");
  const AxisView v(x.shape, axis);
  Shape shape = x.shape;
  shape[axis] = 1;
  Tensor out = Tensor::zeros(shape);
  for (std::size_t o = 0; o < v.outer; ++o) {
    for (std::size_t k = 0; k < v.extent; ++k) {
      for (std::size_t i = 0; i < v.inner; ++i) out.data[o * v.inner + i] += x.data[v.index(o, k, i)];
    }
  }
  return a.tape().record(std::move(out), {a}, [v](const BackwardContext& ctx) {
    auto& gx = *ctx.input_grads[0];
    for (std::size_t o = 0; o < v.outer; ++o) {
      for (std::size_t k = 0; k < v.extent; ++k) {
        for (std::size_t i = 0; i < v.inner; ++i) gx[v.index(o, k, i)] += ctx.grad_output[o * v.inner + i];
      }
    }
  });
}

}  // namespace lhgat::diff
