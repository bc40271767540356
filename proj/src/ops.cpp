// Copyright 2026 The vecforecast Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vf/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "vf/error.hpp"
#include "vf/kernels.hpp"

namespace vf {

namespace {

void require_rank2(const Tensor& t, const char* op) {
  if (t.rank() != 2) {
    throw Error(ErrorKind::kShapeMismatch,
                std::string(op) + ": expected rank-2 operand, got " + shape_string(t.shape()));
  }
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  require_rank2(a, op);
  if (a.shape() != b.shape()) {
    throw Error(ErrorKind::kShapeMismatch, std::string(op) + ": " + shape_string(a.shape()) +
                                               " vs " + shape_string(b.shape()));
  }
}

void require_same_tape(Var a, Var b) {
  if (a.tape() != b.tape()) throw Error(ErrorKind::kShapeMismatch, "operands on different tapes");
}

void accumulate(Tape& tape, std::size_t id, std::span<const double> g, double factor = 1.0) {
  auto dst = tape.grad_accumulator(id).data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += factor * g[i];
}

}  // namespace

Var matmul(Var a, Var b) {
  require_same_tape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  require_rank2(av, "matmul");
  require_rank2(bv, "matmul");
  if (av.cols() != bv.rows()) {
    throw Error(ErrorKind::kShapeMismatch,
                "matmul: " + shape_string(av.shape()) + " x " + shape_string(bv.shape()));
  }
  const std::size_t n = av.rows(), k = av.cols(), m = bv.cols();
  Tensor out({n, m});
  kernels::gemm(av.data(), bv.data(), out.data(), n, k, m);
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape()->record(std::move(out), {ia, ib}, [ia, ib, n, k, m](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    if (t.requires_grad(ia)) {
      Tensor da({n, k});
      kernels::gemm_nt(g.data(), t.value(ib).data(), da.data(), n, m, k);
      accumulate(t, ia, da.data());
    }
    if (t.requires_grad(ib)) {
      Tensor db({k, m});
      kernels::gemm_tn(t.value(ia).data(), g.data(), db.data(), n, k, m);
      accumulate(t, ib, db.data());
    }
  });
}

Var add(Var a, Var b) {
  require_same_tape(a, b);
  require_same_shape(a.value(), b.value(), "add");
  Tensor out = a.value();
  auto bd = b.value().data();
  auto od = out.data();
  for (std::size_t i = 0; i < od.size(); ++i) od[i] += bd[i];
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape()->record(std::move(out), {ia, ib}, [ia, ib](Tape& t, std::size_t self) {
    if (t.requires_grad(ia)) accumulate(t, ia, t.grad(self).data());
    if (t.requires_grad(ib)) accumulate(t, ib, t.grad(self).data());
  });
}

Var sub(Var a, Var b) {
  require_same_tape(a, b);
  require_same_shape(a.value(), b.value(), "sub");
  Tensor out = a.value();
  auto bd = b.value().data();
  auto od = out.data();
  for (std::size_t i = 0; i < od.size(); ++i) od[i] -= bd[i];
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape()->record(std::move(out), {ia, ib}, [ia, ib](Tape& t, std::size_t self) {
    if (t.requires_grad(ia)) accumulate(t, ia, t.grad(self).data());
    if (t.requires_grad(ib)) accumulate(t, ib, t.grad(self).data(), -1.0);
  });
}

Var mul(Var a, Var b) {
  require_same_tape(a, b);
  require_same_shape(a.value(), b.value(), "mul");
  Tensor out = a.value();
  auto bd = b.value().data();
  auto od = out.data();
  for (std::size_t i = 0; i < od.size(); ++i) od[i] *= bd[i];
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape()->record(std::move(out), {ia, ib}, [ia, ib](Tape& t, std::size_t self) {
    auto g = t.grad(self).data();
    if (t.requires_grad(ia)) {
      auto bv = t.value(ib).data();
      auto dst = t.grad_accumulator(ia).data();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += g[i] * bv[i];
    }
    if (t.requires_grad(ib)) {
      auto av = t.value(ia).data();
      auto dst = t.grad_accumulator(ib).data();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += g[i] * av[i];
    }
  });
}

Var add_bias(Var x, Var bias) {
  require_same_tape(x, bias);
  const Tensor& xv = x.value();
  const Tensor& bv = bias.value();
  require_rank2(xv, "add_bias");
  require_rank2(bv, "add_bias");
  if (bv.rows() != 1 || bv.cols() != xv.cols()) {
    throw Error(ErrorKind::kShapeMismatch,
                "add_bias: " + shape_string(xv.shape()) + " + " + shape_string(bv.shape()));
  }
  Tensor out = xv;
  const std::size_t n = xv.rows(), m = xv.cols();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) out(r, c) += bv[c];
  }
  const std::size_t ix = x.id(), ib = bias.id();
  return x.tape()->record(std::move(out), {ix, ib}, [ix, ib, n, m](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    if (t.requires_grad(ix)) accumulate(t, ix, g.data());
    if (t.requires_grad(ib)) {
      Tensor& db = t.grad_accumulator(ib);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < m; ++c) db[c] += g(r, c);
      }
    }
  });
}

Var scale(Var x, double factor) {
  require_rank2(x.value(), "scale");
  Tensor out = x.value();
  for (double& v : out.data()) v *= factor;
  const std::size_t ix = x.id();
  return x.tape()->record(std::move(out), {ix}, [ix, factor](Tape& t, std::size_t self) {
    accumulate(t, ix, t.grad(self).data(), factor);
  });
}

Var relu(Var x) {
  require_rank2(x.value(), "relu");
  Tensor out = x.value();
  for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
  const std::size_t ix = x.id();
  return x.tape()->record(std::move(out), {ix}, [ix](Tape& t, std::size_t self) {
    auto g = t.grad(self).data();
    auto xv = t.value(ix).data();
    auto dst = t.grad_accumulator(ix).data();
    for (std::size_t i = 0; i < dst.size(); ++i) {
      if (xv[i] > 0.0) dst[i] += g[i];
    }
  });
}

Var log(Var x) {
  require_rank2(x.value(), "log");
  Tensor out = x.value();
  for (double& v : out.data()) v = std::log(v);
  const std::size_t ix = x.id();
  return x.tape()->record(std::move(out), {ix}, [ix](Tape& t, std::size_t self) {
    auto g = t.grad(self).data();
    auto xv = t.value(ix).data();
    auto dst = t.grad_accumulator(ix).data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += g[i] / xv[i];
  });
}

namespace {

// Visits every softmax lane: `count` lanes of `len` entries with stride.
struct Lanes {
  std::size_t count, len, outer_stride, inner_stride;
};

Lanes lanes_for(const Tensor& x, int axis, const char* op) {
  require_rank2(x, op);
  if (axis == 1) return {x.rows(), x.cols(), x.cols(), 1};
  if (axis == 0) return {x.cols(), x.rows(), 1, x.cols()};
  throw Error(ErrorKind::kShapeMismatch, std::string(op) + ": axis must be 0 or 1");
}

}  // namespace

Var softmax(Var x, int axis) {
  const Tensor& xv = x.value();
  const Lanes ln = lanes_for(xv, axis, "softmax");
  if (ln.len == 0) throw Error(ErrorKind::kEmptyReduction, "softmax over empty axis");
  Tensor out(xv.shape());
  for (std::size_t l = 0; l < ln.count; ++l) {
    const std::size_t base = l * ln.outer_stride;
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ln.len; ++i) mx = std::max(mx, xv[base + i * ln.inner_stride]);
    double z = 0.0;
    for (std::size_t i = 0; i < ln.len; ++i) {
      const double e = std::exp(xv[base + i * ln.inner_stride] - mx);
      out[base + i * ln.inner_stride] = e;
      z += e;
    }
    for (std::size_t i = 0; i < ln.len; ++i) out[base + i * ln.inner_stride] /= z;
  }
  const std::size_t ix = x.id();
  return x.tape()->record(std::move(out), {ix}, [ix, ln](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    const Tensor& s = t.value(self);
    Tensor& dst = t.grad_accumulator(ix);
    for (std::size_t l = 0; l < ln.count; ++l) {
      const std::size_t base = l * ln.outer_stride;
      double dot = 0.0;
      for (std::size_t i = 0; i < ln.len; ++i) {
        const std::size_t j = base + i * ln.inner_stride;
        dot += g[j] * s[j];
      }
      for (std::size_t i = 0; i < ln.len; ++i) {
        const std::size_t j = base + i * ln.inner_stride;
        dst[j] += s[j] * (g[j] - dot);
      }
    }
  });
}

Var log_softmax(Var x, int axis) {
  const Tensor& xv = x.value();
  const Lanes ln = lanes_for(xv, axis, "log_softmax");
  if (ln.len == 0) throw Error(ErrorKind::kEmptyReduction, "log_softmax over empty axis");
  Tensor out(xv.shape());
  for (std::size_t l = 0; l < ln.count; ++l) {
    const std::size_t base = l * ln.outer_stride;
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ln.len; ++i) mx = std::max(mx, xv[base + i * ln.inner_stride]);
    double z = 0.0;
    for (std::size_t i = 0; i < ln.len; ++i) z += std::exp(xv[base + i * ln.inner_stride] - mx);
    const double lse = mx + std::log(z);
    for (std::size_t i = 0; i < ln.len; ++i) {
      const std::size_t j = base + i * ln.inner_stride;
      out[j] = xv[j] - lse;
    }
  }
  const std::size_t ix = x.id();
  return x.tape()->record(std::move(out), {ix}, [ix, ln](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    const Tensor& ls = t.value(self);
    Tensor& dst = t.grad_accumulator(ix);
    for (std::size_t l = 0; l < ln.count; ++l) {
      const std::size_t base = l * ln.outer_stride;
      double gsum = 0.0;
      for (std::size_t i = 0; i < ln.len; ++i) gsum += g[base + i * ln.inner_stride];
      for (std::size_t i = 0; i < ln.len; ++i) {
        const std::size_t j = base + i * ln.inner_stride;
        dst[j] += g[j] - std::exp(ls[j]) * gsum;
      }
    }
  });
}

Var transpose(Var x) {
  const Tensor& xv = x.value();
  require_rank2(xv, "transpose");
  const std::size_t n = xv.rows(), m = xv.cols();
  Tensor out({m, n});
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) out(c, r) = xv(r, c);
  }
  const std::size_t ix = x.id();
  return x.tape()->record(std::move(out), {ix}, [ix, n, m](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    Tensor& dst = t.grad_accumulator(ix);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < m; ++c) dst(r, c) += g(c, r);
    }
  });
}

Var reshape(Var x, std::size_t rows, std::size_t cols) {
  const Tensor& xv = x.value();
  if (rows * cols != xv.size()) {
    throw Error(ErrorKind::kShapeMismatch, "reshape " + shape_string(xv.shape()) + " to (" +
                                               std::to_string(rows) + "," +
                                               std::to_string(cols) + ")");
  }
  Tensor out({rows, cols}, std::vector<double>(xv.data().begin(), xv.data().end()));
  const std::size_t ix = x.id();
  return x.tape()->record(std::move(out), {ix}, [ix](Tape& t, std::size_t self) {
    accumulate(t, ix, t.grad(self).data());
  });
}

Var concat(Var a, Var b, int axis) {
  require_same_tape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  require_rank2(av, "concat");
  require_rank2(bv, "concat");
  const std::size_t ia = a.id(), ib = b.id();
  if (axis == 0) {
    if (av.cols() != bv.cols()) {
      throw Error(ErrorKind::kShapeMismatch,
                  "concat(axis 0): " + shape_string(av.shape()) + " + " + shape_string(bv.shape()));
    }
    std::vector<double> data(av.data().begin(), av.data().end());
    data.insert(data.end(), bv.data().begin(), bv.data().end());
    const std::size_t na = av.size();
    Tensor out({av.rows() + bv.rows(), av.cols()}, std::move(data));
    return a.tape()->record(std::move(out), {ia, ib}, [ia, ib, na](Tape& t, std::size_t self) {
      auto g = t.grad(self).data();
      if (t.requires_grad(ia)) accumulate(t, ia, g.subspan(0, na));
      if (t.requires_grad(ib)) accumulate(t, ib, g.subspan(na));
    });
  }
  if (axis != 1) throw Error(ErrorKind::kShapeMismatch, "concat: axis must be 0 or 1");
  if (av.rows() != bv.rows()) {
    throw Error(ErrorKind::kShapeMismatch,
                "concat(axis 1): " + shape_string(av.shape()) + " + " + shape_string(bv.shape()));
  }
  const std::size_t n = av.rows(), ma = av.cols(), mb = bv.cols();
  Tensor out({n, ma + mb});
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < ma; ++c) out(r, c) = av(r, c);
    for (std::size_t c = 0; c < mb; ++c) out(r, ma + c) = bv(r, c);
  }
  return a.tape()->record(std::move(out), {ia, ib}, [ia, ib, n, ma, mb](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    if (t.requires_grad(ia)) {
      Tensor& da = t.grad_accumulator(ia);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < ma; ++c) da(r, c) += g(r, c);
      }
    }
    if (t.requires_grad(ib)) {
      Tensor& db = t.grad_accumulator(ib);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < mb; ++c) db(r, c) += g(r, ma + c);
      }
    }
  });
}

Var layer_norm(Var x, Var gain, Var shift, double eps) {
  require_same_tape(x, gain);
  require_same_tape(x, shift);
  const Tensor& xv = x.value();
  require_rank2(xv, "layer_norm");
  const std::size_t n = xv.rows(), m = xv.cols();
  if (gain.value().shape() != Shape{1, m} || shift.value().shape() != Shape{1, m}) {
    throw Error(ErrorKind::kShapeMismatch, "layer_norm: gain/shift must be (1," +
                                               std::to_string(m) + ")");
  }
  const Tensor& gv = gain.value();
  const Tensor& sv = shift.value();
  // Normalized values and inverse deviations are kept for the backward rule.
  auto normalized = std::make_shared<Tensor>(Shape{n, m});
  auto inv_std = std::make_shared<std::vector<double>>(n);
  Tensor out({n, m});
  for (std::size_t r = 0; r < n; ++r) {
    double mu = 0.0;
    for (std::size_t c = 0; c < m; ++c) mu += xv(r, c);
    mu /= static_cast<double>(m);
    double var = 0.0;
    for (std::size_t c = 0; c < m; ++c) var += (xv(r, c) - mu) * (xv(r, c) - mu);
    var /= static_cast<double>(m);
    const double is = 1.0 / std::sqrt(var + eps);
    (*inv_std)[r] = is;
    for (std::size_t c = 0; c < m; ++c) {
      const double y = (xv(r, c) - mu) * is;
      (*normalized)(r, c) = y;
      out(r, c) = gv[c] * y + sv[c];
    }
  }
  const std::size_t ix = x.id(), ig = gain.id(), ish = shift.id();
  return x.tape()->record(
      std::move(out), {ix, ig, ish},
      [ix, ig, ish, n, m, normalized, inv_std](Tape& t, std::size_t self) {
        const Tensor& g = t.grad(self);
        const Tensor& y = *normalized;
        if (t.requires_grad(ig)) {
          Tensor& dg = t.grad_accumulator(ig);
          for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < m; ++c) dg[c] += g(r, c) * y(r, c);
          }
        }
        if (t.requires_grad(ish)) {
          Tensor& ds = t.grad_accumulator(ish);
          for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < m; ++c) ds[c] += g(r, c);
          }
        }
        if (t.requires_grad(ix)) {
          const Tensor& gv2 = t.value(ig);
          Tensor& dx = t.grad_accumulator(ix);
          const double inv_m = 1.0 / static_cast<double>(m);
          for (std::size_t r = 0; r < n; ++r) {
            double mean_dy = 0.0;
            double mean_dy_y = 0.0;
            for (std::size_t c = 0; c < m; ++c) {
              const double dy = g(r, c) * gv2[c];
              mean_dy += dy;
              mean_dy_y += dy * y(r, c);
            }
            mean_dy *= inv_m;
            mean_dy_y *= inv_m;
            for (std::size_t c = 0; c < m; ++c) {
              const double dy = g(r, c) * gv2[c];
              dx(r, c) += (*inv_std)[r] * (dy - mean_dy - y(r, c) * mean_dy_y);
            }
          }
        }
      });
}

Var segment_max(Var x, std::span<const int> segment, std::size_t segments,
                std::span<const std::uint8_t> mask) {
  const Tensor& xv = x.value();
  require_rank2(xv, "segment_max");
  const std::size_t n = xv.rows(), m = xv.cols();
  if (segment.size() != n || (!mask.empty() && mask.size() != n)) {
    throw Error(ErrorKind::kShapeMismatch, "segment_max: segment/mask length mismatch");
  }
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  auto argmax = std::make_shared<std::vector<std::size_t>>(segments * m, kNone);
  Tensor out({segments, m});
  for (std::size_t r = 0; r < n; ++r) {
    if (!mask.empty() && mask[r] == 0) continue;
    const int s = segment[r];
    if (s < 0 || static_cast<std::size_t>(s) >= segments) {
      throw Error(ErrorKind::kIndexOutOfRange, "segment id " + std::to_string(s));
    }
    for (std::size_t c = 0; c < m; ++c) {
      std::size_t& best = (*argmax)[static_cast<std::size_t>(s) * m + c];
      if (best == kNone || xv(r, c) > xv(best, c)) best = r;
    }
  }
  for (std::size_t s = 0; s < segments; ++s) {
    for (std::size_t c = 0; c < m; ++c) {
      const std::size_t best = (*argmax)[s * m + c];
      if (best == kNone) {
        throw Error(ErrorKind::kEmptyReduction, "segment " + std::to_string(s) +
                                                    " has no unmasked rows");
      }
      out(s, c) = xv(best, c);
    }
  }
  const std::size_t ix = x.id();
  return x.tape()->record(std::move(out), {ix}, [ix, segments, m, argmax](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    Tensor& dx = t.grad_accumulator(ix);
    for (std::size_t s = 0; s < segments; ++s) {
      for (std::size_t c = 0; c < m; ++c) dx((*argmax)[s * m + c], c) += g(s, c);
    }
  });
}

Var max_pool_over_set(Var x, std::span<const std::uint8_t> mask) {
  const std::vector<int> segment(x.rows(), 0);
  return segment_max(x, segment, 1, mask);
}

Var gather_rows(Var x, std::span<const std::size_t> rows) {
  const Tensor& xv = x.value();
  require_rank2(xv, "gather_rows");
  const std::size_t m = xv.cols();
  Tensor out({rows.size(), m});
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= xv.rows()) {
      throw Error(ErrorKind::kIndexOutOfRange, "gather_rows index " + std::to_string(rows[r]));
    }
    for (std::size_t c = 0; c < m; ++c) out(r, c) = xv(rows[r], c);
  }
  const std::size_t ix = x.id();
  auto idx = std::make_shared<std::vector<std::size_t>>(rows.begin(), rows.end());
  return x.tape()->record(std::move(out), {ix}, [ix, idx, m](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    Tensor& dx = t.grad_accumulator(ix);
    for (std::size_t r = 0; r < idx->size(); ++r) {
      for (std::size_t c = 0; c < m; ++c) dx((*idx)[r], c) += g(r, c);
    }
  });
}

Var repeat_rows(Var x, std::size_t times) {
  if (x.rows() != 1) throw Error(ErrorKind::kShapeMismatch, "repeat_rows expects a single row");
  const std::vector<std::size_t> rows(times, 0);
  return gather_rows(x, rows);
}

Var pick(Var x, std::size_t row, std::size_t col) {
  const Tensor& xv = x.value();
  require_rank2(xv, "pick");
  if (row >= xv.rows() || col >= xv.cols()) {
    throw Error(ErrorKind::kIndexOutOfRange, "pick (" + std::to_string(row) + "," +
                                                 std::to_string(col) + ") from " +
                                                 shape_string(xv.shape()));
  }
  const std::size_t ix = x.id();
  return x.tape()->record(Tensor::scalar(xv(row, col)), {ix}, [ix, row, col](Tape& t, std::size_t self) {
    t.grad_accumulator(ix)(row, col) += t.grad(self)[0];
  });
}

Var sum(Var x) {
  double s = 0.0;
  for (double v : x.value().data()) s += v;
  const std::size_t ix = x.id();
  return x.tape()->record(Tensor::scalar(s), {ix}, [ix](Tape& t, std::size_t self) {
    const double g = t.grad(self)[0];
    for (double& v : t.grad_accumulator(ix).data()) v += g;
  });
}

Var mean(Var x) {
  const std::size_t n = x.value().size();
  if (n == 0) throw Error(ErrorKind::kEmptyReduction, "mean of empty tensor");
  return scale(sum(x), 1.0 / static_cast<double>(n));
}

Var huber(Var x, double delta) {
  require_rank2(x.value(), "huber");
  Tensor out = x.value();
  for (double& v : out.data()) {
    const double a = std::abs(v);
    v = a <= delta ? 0.5 * v * v : delta * (a - 0.5 * delta);
  }
  const std::size_t ix = x.id();
  return x.tape()->record(std::move(out), {ix}, [ix, delta](Tape& t, std::size_t self) {
    auto g = t.grad(self).data();
    auto xv = t.value(ix).data();
    auto dst = t.grad_accumulator(ix).data();
    for (std::size_t i = 0; i < dst.size(); ++i) {
      const double r = xv[i];
      const double d = std::abs(r) <= delta ? r : (r > 0.0 ? delta : -delta);
      dst[i] += g[i] * d;
    }
  });
}

Var row_norms(Var x) {
  const Tensor& xv = x.value();
  require_rank2(xv, "row_norms");
  const std::size_t n = xv.rows(), m = xv.cols();
  Tensor out({n, 1});
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < m; ++c) s += xv(r, c) * xv(r, c);
    out[r] = std::sqrt(s);
  }
  const std::size_t ix = x.id();
  return x.tape()->record(std::move(out), {ix}, [ix, n, m](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    const Tensor& nv = t.value(self);
    const Tensor& xv2 = t.value(ix);
    Tensor& dx = t.grad_accumulator(ix);
    for (std::size_t r = 0; r < n; ++r) {
      if (nv[r] == 0.0) continue;
      for (std::size_t c = 0; c < m; ++c) dx(r, c) += g[r] * xv2(r, c) / nv[r];
    }
  });
}

Var detach(Var x) { return x.tape()->constant(x.value()); }

}  // namespace vf
