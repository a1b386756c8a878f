#include "election/diff/ops.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "election/errors.h"

namespace election::diff {
namespace {

void RequireSameShape(const char* op, Var a, Var b) {
  if (!a.value().SameShape(b.value())) {
    throw ContractError(std::string(op) + ": shape " + ShapeString(a.value().shape()) + " vs " +
                        ShapeString(b.value().shape()));
  }
}

void RequireRank(const char* op, Var x, std::size_t rank) {
  if (x.value().rank() != rank) {
    throw ContractError(std::string(op) + ": expected rank " + std::to_string(rank) + ", got " +
                        ShapeString(x.value().shape()));
  }
}

void RequireScalar(const char* op, Var x) {
  if (x.value().size() != 1) {
    throw ContractError(std::string(op) + ": expected scalar, got " + ShapeString(x.value().shape()));
  }
}

// Elementwise map with derivative expressed through input and output.
template <typename F, typename DF>
Var Unary(Var x, F f, DF df) {
  const Tensor& xv = x.value();
  Tensor out(xv.shape());
  for (std::size_t i = 0; i < xv.size(); ++i) out[i] = f(xv[i]);
  Tape& tape = *x.tape();
  const int ix = x.id();
  const int iy = static_cast<int>(tape.size());  // id of the node recorded below
  return tape.Record(std::move(out), {x}, [ix, iy, df](Tape& t, const Tensor& g) {
    Tensor* gx = t.MutableGrad(ix);
    const Tensor& xv = t.value(ix);
    const Tensor& yv = t.value(iy);
    for (std::size_t i = 0; i < g.size(); ++i) (*gx)[i] += g[i] * df(xv[i], yv[i]);
  });
}

}  // namespace

Var Add(Var a, Var b) {
  RequireSameShape("Add", a, b);
  Tensor out = a.value();
  out.Accumulate(b.value());
  const int ia = a.id(), ib = b.id();
  return a.tape()->Record(std::move(out), {a, b}, [ia, ib](Tape& t, const Tensor& g) {
    if (Tensor* ga = t.MutableGrad(ia)) ga->Accumulate(g);
    if (Tensor* gb = t.MutableGrad(ib)) gb->Accumulate(g);
  });
}

Var Sub(Var a, Var b) {
  RequireSameShape("Sub", a, b);
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  const int ia = a.id(), ib = b.id();
  return a.tape()->Record(std::move(out), {a, b}, [ia, ib](Tape& t, const Tensor& g) {
    if (Tensor* ga = t.MutableGrad(ia)) ga->Accumulate(g);
    if (Tensor* gb = t.MutableGrad(ib))
      for (std::size_t i = 0; i < g.size(); ++i) (*gb)[i] -= g[i];
  });
}

Var Mul(Var a, Var b) {
  RequireSameShape("Mul", a, b);
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  const int ia = a.id(), ib = b.id();
  return a.tape()->Record(std::move(out), {a, b}, [ia, ib](Tape& t, const Tensor& g) {
    if (Tensor* ga = t.MutableGrad(ia)) {
      const Tensor& bv = t.value(ib);
      for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i] * bv[i];
    }
    if (Tensor* gb = t.MutableGrad(ib)) {
      const Tensor& av = t.value(ia);
      for (std::size_t i = 0; i < g.size(); ++i) (*gb)[i] += g[i] * av[i];
    }
  });
}

Var Scale(Var x, double factor) {
  Tensor out = x.value();
  for (double& v : out.values()) v *= factor;
  const int ix = x.id();
  return x.tape()->Record(std::move(out), {x}, [ix, factor](Tape& t, const Tensor& g) {
    if (Tensor* gx = t.MutableGrad(ix))
      for (std::size_t i = 0; i < g.size(); ++i) (*gx)[i] += g[i] * factor;
  });
}

Var AddScalar(Var x, double offset) {
  Tensor out = x.value();
  for (double& v : out.values()) v += offset;
  const int ix = x.id();
  return x.tape()->Record(std::move(out), {x}, [ix](Tape& t, const Tensor& g) {
    if (Tensor* gx = t.MutableGrad(ix)) gx->Accumulate(g);
  });
}

Var ScaleBy(Var x, Var s) {
  RequireScalar("ScaleBy", s);
  const double sv = s.value()[0];
  Tensor out = x.value();
  for (double& v : out.values()) v *= sv;
  const int ix = x.id(), is = s.id();
  return x.tape()->Record(std::move(out), {x, s}, [ix, is](Tape& t, const Tensor& g) {
    if (Tensor* gx = t.MutableGrad(ix)) {
      const double sv = t.value(is)[0];
      for (std::size_t i = 0; i < g.size(); ++i) (*gx)[i] += g[i] * sv;
    }
    if (Tensor* gs = t.MutableGrad(is)) {
      const Tensor& xv = t.value(ix);
      double acc = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * xv[i];
      (*gs)[0] += acc;
    }
  });
}

Var Elu(Var x) {
  return Unary(
      x, [](double v) { return v > 0.0 ? v : std::expm1(v); },
      [](double v, double y) { return v > 0.0 ? 1.0 : y + 1.0; });
}

Var Sigmoid(Var x) {
  return Unary(
      x,
      [](double v) {
        if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Var Tanh(Var x) {
  return Unary(
      x, [](double v) { return std::tanh(v); }, [](double, double y) { return 1.0 - y * y; });
}

Var Softplus(Var x) {
  return Unary(
      x, [](double v) { return std::max(v, 0.0) + std::log1p(std::exp(-std::abs(v))); },
      [](double v, double) {
        if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
      });
}

Var Sum(Var x) {
  double acc = 0.0;
  for (double v : x.value().values()) acc += v;
  const int ix = x.id();
  return x.tape()->Record(Tensor::Scalar(acc), {x}, [ix](Tape& t, const Tensor& g) {
    if (Tensor* gx = t.MutableGrad(ix))
      for (double& v : gx->values()) v += g[0];
  });
}

Var Dot(Var a, Var b) {
  RequireSameShape("Dot", a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  double acc = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) acc += av[i] * bv[i];
  const int ia = a.id(), ib = b.id();
  return a.tape()->Record(Tensor::Scalar(acc), {a, b}, [ia, ib](Tape& t, const Tensor& g) {
    if (Tensor* ga = t.MutableGrad(ia)) {
      const Tensor& bv = t.value(ib);
      for (std::size_t i = 0; i < bv.size(); ++i) (*ga)[i] += g[0] * bv[i];
    }
    if (Tensor* gb = t.MutableGrad(ib)) {
      const Tensor& av = t.value(ia);
      for (std::size_t i = 0; i < av.size(); ++i) (*gb)[i] += g[0] * av[i];
    }
  });
}

Var SquaredNorm(Var x) {
  const Tensor& xv = x.value();
  double acc = 0.0;
  for (double v : xv.values()) acc += v * v;
  const int ix = x.id();
  return x.tape()->Record(Tensor::Scalar(acc), {x}, [ix](Tape& t, const Tensor& g) {
    if (Tensor* gx = t.MutableGrad(ix)) {
      const Tensor& xv = t.value(ix);
      for (std::size_t i = 0; i < xv.size(); ++i) (*gx)[i] += 2.0 * g[0] * xv[i];
    }
  });
}

Var MatVec(Var w, Var x) {
  RequireRank("MatVec", w, 2);
  RequireRank("MatVec", x, 1);
  const Tensor& wv = w.value();
  const Tensor& xv = x.value();
  const std::size_t r = wv.rows(), c = wv.cols();
  if (xv.size() != c) {
    throw ContractError("MatVec: " + ShapeString(wv.shape()) + " x " + ShapeString(xv.shape()));
  }
  Tensor out(Shape{r});
  for (std::size_t i = 0; i < r; ++i) {
    double acc = 0.0;
    const double* row = &wv.values()[i * c];
    for (std::size_t j = 0; j < c; ++j) acc += row[j] * xv[j];
    out[i] = acc;
  }
  const int iw = w.id(), ix = x.id();
  return w.tape()->Record(std::move(out), {w, x}, [iw, ix, r, c](Tape& t, const Tensor& g) {
    const Tensor& wv = t.value(iw);
    const Tensor& xv = t.value(ix);
    if (Tensor* gw = t.MutableGrad(iw)) {
      for (std::size_t i = 0; i < r; ++i) {
        double* row = &gw->values()[i * c];
        for (std::size_t j = 0; j < c; ++j) row[j] += g[i] * xv[j];
      }
    }
    if (Tensor* gx = t.MutableGrad(ix)) {
      for (std::size_t i = 0; i < r; ++i) {
        const double* row = &wv.values()[i * c];
        for (std::size_t j = 0; j < c; ++j) (*gx)[j] += row[j] * g[i];
      }
    }
  });
}

Var MatMul(Var a, Var b) {
  RequireRank("MatMul", a, 2);
  RequireRank("MatMul", b, 2);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  const std::size_t n = av.rows(), m = av.cols(), p = bv.cols();
  if (bv.rows() != m) {
    throw ContractError("MatMul: " + ShapeString(av.shape()) + " x " + ShapeString(bv.shape()));
  }
  Tensor out(Shape{n, p});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      const double aik = av.at(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < p; ++j) out.at(i, j) += aik * bv.at(k, j);
    }
  const int ia = a.id(), ib = b.id();
  return a.tape()->Record(std::move(out), {a, b}, [ia, ib, n, m, p](Tape& t, const Tensor& g) {
    const Tensor& av = t.value(ia);
    const Tensor& bv = t.value(ib);
    if (Tensor* ga = t.MutableGrad(ia)) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < m; ++k) {
          double acc = 0.0;
          for (std::size_t j = 0; j < p; ++j) acc += g.at(i, j) * bv.at(k, j);
          ga->at(i, k) += acc;
        }
    }
    if (Tensor* gb = t.MutableGrad(ib)) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < m; ++k) {
          const double aik = av.at(i, k);
          if (aik == 0.0) continue;
          for (std::size_t j = 0; j < p; ++j) gb->at(k, j) += aik * g.at(i, j);
        }
    }
  });
}

Var Affine(Var x, Var w, Var b) {
  RequireRank("Affine", w, 2);
  RequireRank("Affine", b, 1);
  const Tensor& xv = x.value();
  const Tensor& wv = w.value();
  const Tensor& bv = b.value();
  const std::size_t out_dim = wv.rows(), in_dim = wv.cols();
  if (bv.size() != out_dim) {
    throw ContractError("Affine: bias " + ShapeString(bv.shape()) + " for weight " +
                        ShapeString(wv.shape()));
  }
  std::size_t batch = 0;
  if (xv.rank() == 1 && xv.size() == in_dim) {
    batch = 1;
  } else if (xv.rank() == 2 && xv.cols() == in_dim) {
    batch = xv.rows();
  } else {
    throw ContractError("Affine: input " + ShapeString(xv.shape()) + " for weight " +
                        ShapeString(wv.shape()));
  }
  Tensor out(xv.rank() == 1 ? Shape{out_dim} : Shape{batch, out_dim});
  for (std::size_t k = 0; k < batch; ++k) {
    const double* xr = &xv.values()[k * in_dim];
    double* orow = &out.values()[k * out_dim];
    for (std::size_t i = 0; i < out_dim; ++i) {
      const double* wr = &wv.values()[i * in_dim];
      double acc = bv[i];
      for (std::size_t j = 0; j < in_dim; ++j) acc += wr[j] * xr[j];
      orow[i] = acc;
    }
  }
  const int ix = x.id(), iw = w.id(), ib = b.id();
  return x.tape()->Record(
      std::move(out), {x, w, b}, [ix, iw, ib, batch, in_dim, out_dim](Tape& t, const Tensor& g) {
        const Tensor& xv = t.value(ix);
        const Tensor& wv = t.value(iw);
        Tensor* gx = t.MutableGrad(ix);
        Tensor* gw = t.MutableGrad(iw);
        Tensor* gb = t.MutableGrad(ib);
        for (std::size_t k = 0; k < batch; ++k) {
          const double* xr = &xv.values()[k * in_dim];
          const double* gr = &g.values()[k * out_dim];
          for (std::size_t i = 0; i < out_dim; ++i) {
            const double gi = gr[i];
            if (gb) (*gb)[i] += gi;
            if (gi == 0.0) continue;
            if (gw) {
              double* gwr = &gw->values()[i * in_dim];
              for (std::size_t j = 0; j < in_dim; ++j) gwr[j] += gi * xr[j];
            }
            if (gx) {
              const double* wr = &wv.values()[i * in_dim];
              double* gxr = &gx->values()[k * in_dim];
              for (std::size_t j = 0; j < in_dim; ++j) gxr[j] += gi * wr[j];
            }
          }
        }
      });
}

Var Concat(const std::vector<Var>& parts) {
  if (parts.empty()) throw ContractError("Concat: no inputs");
  std::vector<double> values;
  std::vector<std::size_t> offsets;
  for (const Var& p : parts) {
    if (p.value().rank() > 1)
      throw ContractError("Concat: expected rank 0 or 1, got " + ShapeString(p.value().shape()));
    offsets.push_back(values.size());
    const auto v = p.value().values();
    values.insert(values.end(), v.begin(), v.end());
  }
  std::vector<int> ids;
  for (const Var& p : parts) ids.push_back(p.id());
  return parts.front().tape()->Record(
      Tensor::Vector(std::move(values)), parts, [ids, offsets](Tape& t, const Tensor& g) {
        for (std::size_t k = 0; k < ids.size(); ++k) {
          if (Tensor* gp = t.MutableGrad(ids[k]))
            for (std::size_t i = 0; i < gp->size(); ++i) (*gp)[i] += g[offsets[k] + i];
        }
      });
}

Var Slice(Var x, std::size_t begin, std::size_t length) {
  RequireRank("Slice", x, 1);
  const Tensor& xv = x.value();
  if (begin + length > xv.size()) throw ContractError("Slice: range out of bounds");
  std::vector<double> values(xv.values().begin() + static_cast<std::ptrdiff_t>(begin),
                             xv.values().begin() + static_cast<std::ptrdiff_t>(begin + length));
  const int ix = x.id();
  return x.tape()->Record(Tensor::Vector(std::move(values)), {x},
                          [ix, begin](Tape& t, const Tensor& g) {
                            if (Tensor* gx = t.MutableGrad(ix))
                              for (std::size_t i = 0; i < g.size(); ++i) (*gx)[begin + i] += g[i];
                          });
}

Var StackRows(const std::vector<Var>& rows) {
  if (rows.empty()) throw ContractError("StackRows: no rows");
  const std::size_t width = rows.front().value().size();
  std::vector<double> values;
  values.reserve(rows.size() * width);
  std::vector<int> ids;
  for (const Var& r : rows) {
    RequireRank("StackRows", r, 1);
    if (r.value().size() != width) throw ContractError("StackRows: ragged rows");
    const auto v = r.value().values();
    values.insert(values.end(), v.begin(), v.end());
    ids.push_back(r.id());
  }
  return rows.front().tape()->Record(Tensor::Matrix(rows.size(), width, std::move(values)), rows,
                                     [ids, width](Tape& t, const Tensor& g) {
                                       for (std::size_t k = 0; k < ids.size(); ++k) {
                                         if (Tensor* gr = t.MutableGrad(ids[k]))
                                           for (std::size_t i = 0; i < width; ++i)
                                             (*gr)[i] += g[k * width + i];
                                       }
                                     });
}

Var Row(Var m, std::size_t r) {
  RequireRank("Row", m, 2);
  const Tensor& mv = m.value();
  if (r >= mv.rows()) throw ContractError("Row: index out of range");
  const std::size_t c = mv.cols();
  const int im = m.id();
  return m.tape()->Record(Tensor::Vector(mv.Row(r)), {m}, [im, r, c](Tape& t, const Tensor& g) {
    if (Tensor* gm = t.MutableGrad(im))
      for (std::size_t j = 0; j < c; ++j) (*gm)[r * c + j] += g[j];
  });
}

Var ColumnMaxPool(Var m) {
  RequireRank("ColumnMaxPool", m, 2);
  const Tensor& mv = m.value();
  const std::size_t n = mv.rows(), d = mv.cols();
  if (n == 0) throw ContractError("ColumnMaxPool: empty input");
  Tensor out(Shape{d});
  std::vector<std::size_t> arg(d, 0);
  for (std::size_t j = 0; j < d; ++j) {
    double best = mv.at(0, j);
    for (std::size_t i = 1; i < n; ++i) {
      if (mv.at(i, j) > best) {
        best = mv.at(i, j);
        arg[j] = i;
      }
    }
    out[j] = best;
  }
  const int im = m.id();
  return m.tape()->Record(std::move(out), {m}, [im, arg, d](Tape& t, const Tensor& g) {
    if (Tensor* gm = t.MutableGrad(im))
      for (std::size_t j = 0; j < d; ++j) (*gm)[arg[j] * d + j] += g[j];
  });
}

Var Embed(Var table, Var weights) {
  RequireRank("Embed", table, 2);
  RequireRank("Embed", weights, 1);
  const Tensor& tv = table.value();
  const Tensor& wv = weights.value();
  const std::size_t count = tv.rows(), dim = tv.cols();
  if (wv.size() != count) {
    throw ContractError("Embed: weights " + ShapeString(wv.shape()) + " for table " +
                        ShapeString(tv.shape()));
  }
  Tensor out(Shape{dim});
  for (std::size_t i = 0; i < count; ++i) {
    if (wv[i] == 0.0) continue;
    for (std::size_t j = 0; j < dim; ++j) out[j] += wv[i] * tv.at(i, j);
  }
  const int it = table.id(), iw = weights.id();
  return table.tape()->Record(std::move(out), {table, weights},
                              [it, iw, count, dim](Tape& t, const Tensor& g) {
                                if (Tensor* gt = t.MutableGrad(it)) {
                                  const Tensor& wv = t.value(iw);
                                  for (std::size_t i = 0; i < count; ++i) {
                                    if (wv[i] == 0.0) continue;
                                    for (std::size_t j = 0; j < dim; ++j) gt->at(i, j) += wv[i] * g[j];
                                  }
                                }
                                if (Tensor* gw = t.MutableGrad(iw)) {
                                  const Tensor& tv = t.value(it);
                                  for (std::size_t i = 0; i < count; ++i) {
                                    double acc = 0.0;
                                    for (std::size_t j = 0; j < dim; ++j) acc += tv.at(i, j) * g[j];
                                    (*gw)[i] += acc;
                                  }
                                }
                              });
}

Var Detach(Var x) { return x.tape()->Constant(x.value()); }

Var Softmax(Var logits) {
  RequireRank("Softmax", logits, 1);
  const Tensor& lv = logits.value();
  Tensor out(lv.shape());
  double mx = lv[0];
  for (double v : lv.values()) mx = std::max(mx, v);
  double z = 0.0;
  for (std::size_t i = 0; i < lv.size(); ++i) z += (out[i] = std::exp(lv[i] - mx));
  for (double& v : out.values()) v /= z;
  Tape& tape = *logits.tape();
  const int il = logits.id();
  const int iy = static_cast<int>(tape.size());
  return tape.Record(std::move(out), {logits}, [il, iy](Tape& t, const Tensor& g) {
    Tensor* gl = t.MutableGrad(il);
    const Tensor& yv = t.value(iy);
    double inner = 0.0;
    for (std::size_t i = 0; i < yv.size(); ++i) inner += g[i] * yv[i];
    for (std::size_t i = 0; i < yv.size(); ++i) (*gl)[i] += yv[i] * (g[i] - inner);
  });
}

}  // namespace election::diff
