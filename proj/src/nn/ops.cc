/*
 * Copyright 2026 The cwtvc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cwtvc/nn/ops.h"

#include <cmath>
#include <vector>

namespace cwtvc::nn {

namespace {

// FNV-1a over per-element branch codes.
struct BranchHash {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void add(unsigned code) { h = (h ^ (code + 1)) * 0x100000001b3ULL; }
};

void require_same_shape(Var a, Var b, const char* op) {
  if (a.shape() != b.shape())
    throw InvalidArgument(std::string(op) + ": shape " + shape_string(a.shape()) + " vs " +
                          shape_string(b.shape()));
}

void require_rank(Var x, std::size_t rank, const char* op, const char* what) {
  if (x.value().rank() != rank)
    throw InvalidArgument(std::string(op) + ": " + what + " must have rank " + std::to_string(rank) +
                          ", got " + shape_string(x.shape()));
}

void accumulate(Tensor& dst, const Tensor& src, double factor = 1.0) {
  double* d = dst.data();
  const double* s = src.data();
  for (std::size_t i = 0; i < dst.size(); ++i) d[i] += factor * s[i];
}

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Output positions t with 0 <= t*stride + k - pad < n_in, as [lo, hi).
std::pair<std::size_t, std::size_t> valid_range(std::size_t n_out, std::size_t n_in, std::size_t stride,
                                                std::size_t k, std::size_t pad) {
  const long long off = static_cast<long long>(k) - static_cast<long long>(pad);
  const long long s = static_cast<long long>(stride);
  long long lo = 0;
  if (off < 0) lo = (-off + s - 1) / s;
  long long hi = (static_cast<long long>(n_in) - 1 - off);
  hi = hi < 0 ? 0 : hi / s + 1;
  if (hi > static_cast<long long>(n_out)) hi = static_cast<long long>(n_out);
  if (lo > hi) lo = hi;
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

std::size_t conv_out(std::size_t n, std::size_t k, std::size_t stride, std::size_t pad, const char* op) {
  if (stride == 0) throw InvalidArgument(std::string(op) + ": stride must be positive");
  if (n + 2 * pad < k)
    throw InvalidArgument(std::string(op) + ": input of extent " + std::to_string(n) +
                          " is smaller than the kernel");
  return (n + 2 * pad - k) / stride + 1;
}

}  // namespace

Var add(Var a, Var b) {
  require_same_shape(a, b, "add");
  Tensor out = a.value();
  accumulate(out, b.value());
  const auto ia = a.id(), ib = b.id();
  return a.tape().record(std::move(out), {a, b}, [ia, ib](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    if (t.needs_grad(ia)) accumulate(t.grad_buffer(ia), g);
    if (t.needs_grad(ib)) accumulate(t.grad_buffer(ib), g);
  });
}

Var sub(Var a, Var b) {
  require_same_shape(a, b, "sub");
  Tensor out = a.value();
  accumulate(out, b.value(), -1.0);
  const auto ia = a.id(), ib = b.id();
  return a.tape().record(std::move(out), {a, b}, [ia, ib](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    if (t.needs_grad(ia)) accumulate(t.grad_buffer(ia), g);
    if (t.needs_grad(ib)) accumulate(t.grad_buffer(ib), g, -1.0);
  });
}

Var mul(Var a, Var b) {
  require_same_shape(a, b, "mul");
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b.value()[i];
  const auto ia = a.id(), ib = b.id();
  return a.tape().record(std::move(out), {a, b}, [ia, ib](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    const Tensor& av = t.value_of(ia);
    const Tensor& bv = t.value_of(ib);
    if (t.needs_grad(ia)) {
      Tensor& ga = t.grad_buffer(ia);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv[i];
    }
    if (t.needs_grad(ib)) {
      Tensor& gb = t.grad_buffer(ib);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
    }
  });
}

Var add_scalar(Var a, double c) {
  Tensor out = a.value();
  for (auto& v : out.values()) v += c;
  const auto ia = a.id();
  return a.tape().record(std::move(out), {a}, [ia](Tape& t, std::size_t self) {
    accumulate(t.grad_buffer(ia), t.grad_of(self));
  });
}

Var scale(Var a, double c) {
  Tensor out = a.value();
  for (auto& v : out.values()) v *= c;
  const auto ia = a.id();
  return a.tape().record(std::move(out), {a}, [ia, c](Tape& t, std::size_t self) {
    accumulate(t.grad_buffer(ia), t.grad_of(self), c);
  });
}

Var sigmoid(Var x) {
  Tensor out = x.value();
  for (auto& v : out.values()) v = stable_sigmoid(v);
  const auto ix = x.id();
  return x.tape().record(std::move(out), {x}, [ix](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    const Tensor& y = t.value_of(self);
    Tensor& gx = t.grad_buffer(ix);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * y[i] * (1.0 - y[i]);
  });
}

Var leaky_relu(Var x, double slope) {
  Tensor out = x.value();
  BranchHash bh;
  for (auto& v : out.values()) {
    bh.add(v > 0.0);
    v = v > 0.0 ? v : slope * v;
  }
  x.tape().note_branches(bh.h);
  const auto ix = x.id();
  return x.tape().record(std::move(out), {x}, [ix, slope](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    const Tensor& xv = t.value_of(ix);
    Tensor& gx = t.grad_buffer(ix);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += xv[i] > 0.0 ? g[i] : slope * g[i];
  });
}

Var log(Var x) {
  Tensor out = x.value();
  for (auto& v : out.values()) v = std::log(v);
  const auto ix = x.id();
  return x.tape().record(std::move(out), {x}, [ix](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    const Tensor& xv = t.value_of(ix);
    Tensor& gx = t.grad_buffer(ix);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] / xv[i];
  });
}

Var clamp(Var x, double lo, double hi) {
  if (!(lo <= hi)) throw InvalidArgument("clamp: lo must not exceed hi");
  Tensor out = x.value();
  BranchHash bh;
  for (auto& v : out.values()) {
    bh.add(v < lo ? 0 : (v > hi ? 2 : 1));
    v = v < lo ? lo : (v > hi ? hi : v);
  }
  x.tape().note_branches(bh.h);
  const auto ix = x.id();
  return x.tape().record(std::move(out), {x}, [ix, lo, hi](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    const Tensor& xv = t.value_of(ix);
    Tensor& gx = t.grad_buffer(ix);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (xv[i] >= lo && xv[i] <= hi) gx[i] += g[i];
  });
}

Var sum(Var x) {
  double acc = 0.0;
  for (double v : x.value().values()) acc += v;
  const auto ix = x.id();
  return x.tape().record(Tensor::scalar(acc), {x}, [ix](Tape& t, std::size_t self) {
    const double g = t.grad_of(self)[0];
    for (auto& v : t.grad_buffer(ix).values()) v += g;
  });
}

Var mean(Var x) {
  const double n = static_cast<double>(x.size());
  return scale(sum(x), 1.0 / n);
}

Var l1_mean(Var a, Var b) {
  require_same_shape(a, b, "l1_mean");
  const std::size_t n = a.size();
  double acc = 0.0;
  BranchHash bh;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a.value()[i] - b.value()[i];
    bh.add(d > 0.0 ? 2 : (d < 0.0 ? 0 : 1));
    acc += std::abs(d);
  }
  a.tape().note_branches(bh.h);
  const auto ia = a.id(), ib = b.id();
  return a.tape().record(Tensor::scalar(acc / static_cast<double>(n)), {a, b},
                         [ia, ib, n](Tape& t, std::size_t self) {
                           const double g = t.grad_of(self)[0] / static_cast<double>(n);
                           const Tensor& av = t.value_of(ia);
                           const Tensor& bv = t.value_of(ib);
                           auto sign = [](double d) { return d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0); };
                           if (t.needs_grad(ia)) {
                             Tensor& ga = t.grad_buffer(ia);
                             for (std::size_t i = 0; i < n; ++i) ga[i] += g * sign(av[i] - bv[i]);
                           }
                           if (t.needs_grad(ib)) {
                             Tensor& gb = t.grad_buffer(ib);
                             for (std::size_t i = 0; i < n; ++i) gb[i] -= g * sign(av[i] - bv[i]);
                           }
                         });
}

Var reshape(Var x, Shape shape) {
  Tensor out = x.value().reshaped(std::move(shape));
  const auto ix = x.id();
  return x.tape().record(std::move(out), {x}, [ix](Tape& t, std::size_t self) {
    accumulate(t.grad_buffer(ix), t.grad_of(self));
  });
}

Var concat(std::span<const Var> parts) {
  if (parts.empty()) throw InvalidArgument("concat: no inputs");
  Shape tail(parts[0].shape().begin() + 1, parts[0].shape().end());
  std::size_t lead = 0;
  std::vector<std::size_t> ids, offsets;
  std::vector<double> data;
  for (const Var& p : parts) {
    Shape pt(p.shape().begin() + 1, p.shape().end());
    if (pt != tail || &p.tape() != &parts[0].tape())
      throw InvalidArgument("concat: trailing shapes differ");
    offsets.push_back(data.size());
    ids.push_back(p.id());
    data.insert(data.end(), p.value().values().begin(), p.value().values().end());
    lead += p.shape()[0];
  }
  Shape shape{lead};
  shape.insert(shape.end(), tail.begin(), tail.end());
  return parts[0].tape().record_range(Tensor(std::move(shape), std::move(data)), parts,
                                      [ids, offsets](Tape& t, std::size_t self) {
                                        const Tensor& g = t.grad_of(self);
                                        for (std::size_t k = 0; k < ids.size(); ++k) {
                                          if (!t.needs_grad(ids[k])) continue;
                                          Tensor& gp = t.grad_buffer(ids[k]);
                                          for (std::size_t i = 0; i < gp.size(); ++i)
                                            gp[i] += g[offsets[k] + i];
                                        }
                                      });
}

Var glu(Var x) {
  const Shape& in = x.shape();
  if (in[0] % 2 != 0) throw InvalidArgument("glu: leading extent must be even, got " + shape_string(in));
  Shape shape = in;
  shape[0] /= 2;
  const std::size_t half = x.size() / 2;
  Tensor out(shape);
  const Tensor& xv = x.value();
  for (std::size_t i = 0; i < half; ++i) out[i] = xv[i] * stable_sigmoid(xv[half + i]);
  const auto ix = x.id();
  return x.tape().record(std::move(out), {x}, [ix, half](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    const Tensor& xv = t.value_of(ix);
    Tensor& gx = t.grad_buffer(ix);
    for (std::size_t i = 0; i < half; ++i) {
      const double s = stable_sigmoid(xv[half + i]);
      gx[i] += g[i] * s;
      gx[half + i] += g[i] * xv[i] * s * (1.0 - s);
    }
  });
}

Var conv1d(Var x, Var w, Var b, std::size_t stride, std::size_t pad) {
  require_rank(x, 2, "conv1d", "input");
  require_rank(w, 3, "conv1d", "weight");
  require_rank(b, 1, "conv1d", "bias");
  const std::size_t cin = x.shape()[0], tin = x.shape()[1];
  const std::size_t cout = w.shape()[0], k = w.shape()[2];
  if (w.shape()[1] != cin)
    throw InvalidArgument("conv1d: weight " + shape_string(w.shape()) + " vs input " + shape_string(x.shape()));
  if (b.shape()[0] != cout) throw InvalidArgument("conv1d: bias extent differs from output channels");
  const std::size_t tout = conv_out(tin, k, stride, pad, "conv1d");

  Tensor out({cout, tout});
  const double* xd = x.value().data();
  const double* wd = w.value().data();
  const double* bd = b.value().data();
  for (std::size_t o = 0; o < cout; ++o) {
    double* y = out.data() + o * tout;
    for (std::size_t t = 0; t < tout; ++t) y[t] = bd[o];
    for (std::size_t c = 0; c < cin; ++c) {
      const double* xr = xd + c * tin;
      for (std::size_t kk = 0; kk < k; ++kk) {
        const double wk = wd[(o * cin + c) * k + kk];
        auto [lo, hi] = valid_range(tout, tin, stride, kk, pad);
        for (std::size_t t = lo; t < hi; ++t) y[t] += wk * xr[t * stride + kk - pad];
      }
    }
  }

  const auto ix = x.id(), iw = w.id(), ib = b.id();
  return x.tape().record(std::move(out), {x, w, b}, [=](Tape& t, std::size_t self) {
    const double* g = t.grad_of(self).data();
    const double* xv = t.value_of(ix).data();
    const double* wv = t.value_of(iw).data();
    if (t.needs_grad(ib)) {
      Tensor& gb = t.grad_buffer(ib);
      for (std::size_t o = 0; o < cout; ++o) {
        double acc = 0.0;
        for (std::size_t tt = 0; tt < tout; ++tt) acc += g[o * tout + tt];
        gb[o] += acc;
      }
    }
    const bool need_w = t.needs_grad(iw), need_x = t.needs_grad(ix);
    double* gw = need_w ? t.grad_buffer(iw).data() : nullptr;
    double* gx = need_x ? t.grad_buffer(ix).data() : nullptr;
    for (std::size_t o = 0; o < cout; ++o) {
      const double* go = g + o * tout;
      for (std::size_t c = 0; c < cin; ++c) {
        for (std::size_t kk = 0; kk < k; ++kk) {
          auto [lo, hi] = valid_range(tout, tin, stride, kk, pad);
          const std::size_t widx = (o * cin + c) * k + kk;
          if (need_w) {
            const double* xs = xv + c * tin;
            double acc = 0.0;
            for (std::size_t tt = lo; tt < hi; ++tt) acc += go[tt] * xs[tt * stride + kk - pad];
            gw[widx] += acc;
          }
          if (need_x) {
            double* gs = gx + c * tin;
            const double wk = wv[widx];
            for (std::size_t tt = lo; tt < hi; ++tt) gs[tt * stride + kk - pad] += wk * go[tt];
          }
        }
      }
    }
  });
}

Var conv2d(Var x, Var w, Var b, std::array<std::size_t, 2> stride, std::array<std::size_t, 2> pad) {
  require_rank(x, 3, "conv2d", "input");
  require_rank(w, 4, "conv2d", "weight");
  require_rank(b, 1, "conv2d", "bias");
  const std::size_t cin = x.shape()[0], hin = x.shape()[1], win = x.shape()[2];
  const std::size_t cout = w.shape()[0], kh = w.shape()[2], kw = w.shape()[3];
  if (w.shape()[1] != cin)
    throw InvalidArgument("conv2d: weight " + shape_string(w.shape()) + " vs input " + shape_string(x.shape()));
  if (b.shape()[0] != cout) throw InvalidArgument("conv2d: bias extent differs from output channels");
  const std::size_t hout = conv_out(hin, kh, stride[0], pad[0], "conv2d");
  const std::size_t wout = conv_out(win, kw, stride[1], pad[1], "conv2d");
  const std::size_t sh = stride[0], sw = stride[1], ph = pad[0], pw = pad[1];

  Tensor out({cout, hout, wout});
  const double* xd = x.value().data();
  const double* wd = w.value().data();
  const double* bd = b.value().data();
  for (std::size_t o = 0; o < cout; ++o) {
    double* yo = out.data() + o * hout * wout;
    for (std::size_t i = 0; i < hout * wout; ++i) yo[i] = bd[o];
    for (std::size_t c = 0; c < cin; ++c) {
      for (std::size_t a = 0; a < kh; ++a) {
        auto [hlo, hhi] = valid_range(hout, hin, sh, a, ph);
        for (std::size_t bb = 0; bb < kw; ++bb) {
          const double wk = wd[((o * cin + c) * kh + a) * kw + bb];
          auto [wlo, whi] = valid_range(wout, win, sw, bb, pw);
          for (std::size_t r = hlo; r < hhi; ++r) {
            const double* xs = xd + (c * hin + r * sh + a - ph) * win;
            double* y = yo + r * wout;
            for (std::size_t q = wlo; q < whi; ++q) y[q] += wk * xs[q * sw + bb - pw];
          }
        }
      }
    }
  }

  const auto ix = x.id(), iw = w.id(), ib = b.id();
  return x.tape().record(std::move(out), {x, w, b}, [=](Tape& t, std::size_t self) {
    const double* g = t.grad_of(self).data();
    const double* xv = t.value_of(ix).data();
    const double* wv = t.value_of(iw).data();
    const std::size_t plane = hout * wout;
    if (t.needs_grad(ib)) {
      Tensor& gb = t.grad_buffer(ib);
      for (std::size_t o = 0; o < cout; ++o) {
        double acc = 0.0;
        for (std::size_t i = 0; i < plane; ++i) acc += g[o * plane + i];
        gb[o] += acc;
      }
    }
    const bool need_w = t.needs_grad(iw), need_x = t.needs_grad(ix);
    double* gw = need_w ? t.grad_buffer(iw).data() : nullptr;
    double* gx = need_x ? t.grad_buffer(ix).data() : nullptr;
    for (std::size_t o = 0; o < cout; ++o) {
      const double* go = g + o * plane;
      for (std::size_t c = 0; c < cin; ++c) {
        for (std::size_t a = 0; a < kh; ++a) {
          auto [hlo, hhi] = valid_range(hout, hin, sh, a, ph);
          for (std::size_t bb = 0; bb < kw; ++bb) {
            const std::size_t widx = ((o * cin + c) * kh + a) * kw + bb;
            auto [wlo, whi] = valid_range(wout, win, sw, bb, pw);
            double acc = 0.0;
            const double wk = wv[widx];
            for (std::size_t r = hlo; r < hhi; ++r) {
              const std::size_t xoff = (c * hin + r * sh + a - ph) * win;
              const double* gr = go + r * wout;
              if (need_w) {
                const double* xs = xv + xoff;
                for (std::size_t q = wlo; q < whi; ++q) acc += gr[q] * xs[q * sw + bb - pw];
              }
              if (need_x) {
                double* gs = gx + xoff;
                for (std::size_t q = wlo; q < whi; ++q) gs[q * sw + bb - pw] += wk * gr[q];
              }
            }
            if (need_w) gw[widx] += acc;
          }
        }
      }
    }
  });
}

Var pixel_shuffle1d(Var x, std::size_t factor) {
  require_rank(x, 2, "pixel_shuffle1d", "input");
  const std::size_t cr = x.shape()[0], tin = x.shape()[1];
  if (factor == 0 || cr % factor != 0)
    throw InvalidArgument("pixel_shuffle1d: channels not divisible by factor");
  const std::size_t c_out = cr / factor, tout = tin * factor;
  Tensor out({c_out, tout});
  const Tensor& xv = x.value();
  for (std::size_t c = 0; c < c_out; ++c)
    for (std::size_t j = 0; j < factor; ++j)
      for (std::size_t t = 0; t < tin; ++t) out[c * tout + t * factor + j] = xv[(c * factor + j) * tin + t];
  const auto ix = x.id();
  return x.tape().record(std::move(out), {x}, [=](Tape& tp, std::size_t self) {
    const Tensor& g = tp.grad_of(self);
    Tensor& gx = tp.grad_buffer(ix);
    for (std::size_t c = 0; c < c_out; ++c)
      for (std::size_t j = 0; j < factor; ++j)
        for (std::size_t t = 0; t < tin; ++t) gx[(c * factor + j) * tin + t] += g[c * tout + t * factor + j];
  });
}

Var instance_norm(Var x, Var gamma, Var beta, double eps) {
  if (x.value().rank() < 2) throw InvalidArgument("instance_norm: input needs a channel and a spatial axis");
  const std::size_t ch = x.shape()[0];
  const std::size_t n = x.size() / ch;
  if (gamma.shape() != Shape{ch} || beta.shape() != Shape{ch})
    throw InvalidArgument("instance_norm: gamma/beta must have shape [" + std::to_string(ch) + "]");

  Tensor out(x.shape());
  Tensor xhat(x.shape());
  std::vector<double> inv_std(ch);
  const Tensor& xv = x.value();
  for (std::size_t c = 0; c < ch; ++c) {
    const double* xs = xv.data() + c * n;
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) mu += xs[i];
    mu /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (xs[i] - mu) * (xs[i] - mu);
    var /= static_cast<double>(n);
    inv_std[c] = 1.0 / std::sqrt(var + eps);
    const double gm = gamma.value()[c], bt = beta.value()[c];
    for (std::size_t i = 0; i < n; ++i) {
      const double h = (xs[i] - mu) * inv_std[c];
      xhat[c * n + i] = h;
      out[c * n + i] = gm * h + bt;
    }
  }

  const auto ix = x.id(), ig = gamma.id(), ibt = beta.id();
  return x.tape().record(std::move(out), {x, gamma, beta},
                         [=, xhat = std::move(xhat), inv_std = std::move(inv_std)](Tape& t, std::size_t self) {
                           const Tensor& g = t.grad_of(self);
                           const Tensor& gm = t.value_of(ig);
                           const double dn = static_cast<double>(n);
                           for (std::size_t c = 0; c < ch; ++c) {
                             const double* gs = g.data() + c * n;
                             const double* hs = xhat.data() + c * n;
                             double sum_g = 0.0, sum_gh = 0.0;
                             for (std::size_t i = 0; i < n; ++i) {
                               sum_g += gs[i];
                               sum_gh += gs[i] * hs[i];
                             }
                             if (t.needs_grad(ig)) t.grad_buffer(ig)[c] += sum_gh;
                             if (t.needs_grad(ibt)) t.grad_buffer(ibt)[c] += sum_g;
                             if (t.needs_grad(ix)) {
                               // dxhat = g * gamma; dx = inv/N (N dxhat - sum dxhat - xhat sum dxhat xhat)
                               double* gx = t.grad_buffer(ix).data() + c * n;
                               const double k = gm[c] * inv_std[c] / dn;
                               for (std::size_t i = 0; i < n; ++i)
                                 gx[i] += k * (dn * gs[i] - sum_g - hs[i] * sum_gh);
                             }
                           }
                         });
}

Var dense(Var x, Var w, Var b) {
  require_rank(w, 2, "dense", "weight");
  require_rank(b, 1, "dense", "bias");
  const std::size_t m = w.shape()[0], n = w.shape()[1];
  if (x.size() != n) throw InvalidArgument("dense: input has " + std::to_string(x.size()) + " values, weight expects " + std::to_string(n));
  if (b.shape()[0] != m) throw InvalidArgument("dense: bias extent differs from output size");
  Tensor out({m});
  const double* xv = x.value().data();
  for (std::size_t r = 0; r < m; ++r) {
    const double* wr = w.value().data() + r * n;
    double acc = b.value()[r];
    for (std::size_t i = 0; i < n; ++i) acc += wr[i] * xv[i];
    out[r] = acc;
  }
  const auto ix = x.id(), iw = w.id(), ib = b.id();
  return x.tape().record(std::move(out), {x, w, b}, [=](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    const double* xd = t.value_of(ix).data();
    const double* wd = t.value_of(iw).data();
    if (t.needs_grad(ib)) accumulate(t.grad_buffer(ib), g);
    if (t.needs_grad(iw)) {
      double* gw = t.grad_buffer(iw).data();
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t i = 0; i < n; ++i) gw[r * n + i] += g[r] * xd[i];
    }
    if (t.needs_grad(ix)) {
      double* gx = t.grad_buffer(ix).data();
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t i = 0; i < n; ++i) gx[i] += g[r] * wd[r * n + i];
    }
  });
}

Var channel_mean(Var x) {
  if (x.value().rank() < 2) throw InvalidArgument("channel_mean: input needs a channel and a spatial axis");
  const std::size_t ch = x.shape()[0];
  const std::size_t n = x.size() / ch;
  Tensor out({ch});
  for (std::size_t c = 0; c < ch; ++c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x.value()[c * n + i];
    out[c] = acc / static_cast<double>(n);
  }
  const auto ix = x.id();
  return x.tape().record(std::move(out), {x}, [ix, ch, n](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    Tensor& gx = t.grad_buffer(ix);
    for (std::size_t c = 0; c < ch; ++c) {
      const double gc = g[c] / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) gx[c * n + i] += gc;
    }
  });
}

}  // namespace cwtvc::nn
