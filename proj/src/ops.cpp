#include "cone/ops.hpp"

#include <algorithm>
#include <cmath>

#include "cone/error.hpp"

namespace cone::nn {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(std::string("shape mismatch: ") + what);
}

template <typename F>
Var unary(Tape& t, Var a, F&& f, BackwardFn back) {
  const Tensor& x = t.value(a);
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
  return t.record(std::move(y), std::move(back));
}

}  // namespace

Var lookup(Tape& t, Var table, std::size_t index) {
  const Tensor& tab = t.value(table);
  require(tab.rank() == 2, "lookup needs a matrix table");
  if (index >= tab.rows())
    throw Error("token index " + std::to_string(index) + " outside table of " + std::to_string(tab.rows()) + " rows");
  auto r = tab.row(index);
  Tensor y = Tensor::vector({r.begin(), r.end()});
  return t.record(std::move(y), [table, index](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    auto dst = tp.grad(table).row(index);
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += g[k];
  });
}

Var gather_sum(Tape& t, Var table, std::span<const std::uint32_t> indices) {
  const Tensor& tab = t.value(table);
  require(tab.rank() == 2, "gather_sum needs a matrix table");
  Tensor y({tab.cols()});
  for (auto idx : indices) {
    if (idx >= tab.rows())
      throw Error("token index " + std::to_string(idx) + " outside table of " + std::to_string(tab.rows()) + " rows");
    auto r = tab.row(idx);
    for (std::size_t k = 0; k < r.size(); ++k) y[k] += r[k];
  }
  std::vector<std::uint32_t> saved(indices.begin(), indices.end());
  return t.record(std::move(y), [table, saved = std::move(saved)](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    Tensor& gt = tp.grad(table);
    for (auto idx : saved) {
      auto dst = gt.row(idx);
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += g[k];
    }
  });
}

Var matvec(Tape& t, Var w, Var x) {
  const Tensor& W = t.value(w);
  const Tensor& X = t.value(x);
  require(W.rank() == 2 && X.size() == W.cols(), "matvec");
  Tensor y({W.rows()});
  for (std::size_t r = 0; r < W.rows(); ++r) {
    auto row = W.row(r);
    double s = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) s += row[c] * X[c];
    y[r] = s;
  }
  return t.record(std::move(y), [w, x](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    const Tensor& W = tp.value(w);
    const Tensor& X = tp.value(x);
    Tensor& gw = tp.grad(w);
    Tensor& gx = tp.grad(x);
    for (std::size_t r = 0; r < W.rows(); ++r) {
      const double gr = g[r];
      if (gr == 0.0) continue;
      auto wr = W.row(r);
      auto gwr = gw.row(r);
      for (std::size_t c = 0; c < wr.size(); ++c) {
        gwr[c] += gr * X[c];
        gx[c] += gr * wr[c];
      }
    }
  });
}

Var affine(Tape& t, Var w, Var x, Var b) {
  const std::size_t bias_size = t.value(b).size();
  Var wx = matvec(t, w, x);
  require(t.value(wx).size() == bias_size, "affine bias");
  return add(t, wx, b);
}

Var add(Tape& t, Var a, Var b) {
  const Tensor& A = t.value(a);
  const Tensor& B = t.value(b);
  require(A.size() == B.size(), "add");
  Tensor y(A.shape());
  for (std::size_t i = 0; i < A.size(); ++i) y[i] = A[i] + B[i];
  return t.record(std::move(y), [a, b](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    Tensor& ga = tp.grad(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    Tensor& gb = tp.grad(b);
    for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i];
  });
}

Var hadamard(Tape& t, Var a, Var b) {
  const Tensor& A = t.value(a);
  const Tensor& B = t.value(b);
  require(A.size() == B.size(), "hadamard");
  Tensor y(A.shape());
  for (std::size_t i = 0; i < A.size(); ++i) y[i] = A[i] * B[i];
  return t.record(std::move(y), [a, b](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    const Tensor& A = tp.value(a);
    const Tensor& B = tp.value(b);
    Tensor& ga = tp.grad(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * B[i];
    Tensor& gb = tp.grad(b);
    for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * A[i];
  });
}

Var sigmoid(Tape& t, Var a) {
  return unary(
      t, a, [](double v) { return 1.0 / (1.0 + std::exp(-v)); },
      [a](Tape& tp, Var self) {
        const Tensor& g = tp.grad(self);
        const Tensor& y = tp.value(self);
        Tensor& ga = tp.grad(a);
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
      });
}

Var tanh(Tape& t, Var a) {
  return unary(
      t, a, [](double v) { return std::tanh(v); },
      [a](Tape& tp, Var self) {
        const Tensor& g = tp.grad(self);
        const Tensor& y = tp.value(self);
        Tensor& ga = tp.grad(a);
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
      });
}

Var relu(Tape& t, Var a) {
  return unary(
      t, a, [](double v) { return v > 0.0 ? v : 0.0; },
      [a](Tape& tp, Var self) {
        const Tensor& g = tp.grad(self);
        const Tensor& x = tp.value(a);
        Tensor& ga = tp.grad(a);
        for (std::size_t i = 0; i < g.size(); ++i)
          if (x[i] > 0.0) ga[i] += g[i];
      });
}

Var slice(Tape& t, Var a, std::size_t offset, std::size_t length) {
  const Tensor& A = t.value(a);
  require(offset + length <= A.size(), "slice");
  auto d = A.data().subspan(offset, length);
  return t.record(Tensor::vector({d.begin(), d.end()}), [a, offset](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    Tensor& ga = tp.grad(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[offset + i] += g[i];
  });
}

Var mean(Tape& t, std::span<const Var> inputs) {
  if (inputs.empty()) throw Error("mean of an empty list");
  const std::size_t p = t.value(inputs[0]).size();
  Tensor y({p});
  for (Var v : inputs) {
    const Tensor& x = t.value(v);
    require(x.size() == p, "mean");
    for (std::size_t k = 0; k < p; ++k) y[k] += x[k];
  }
  const double inv = 1.0 / static_cast<double>(inputs.size());
  for (std::size_t k = 0; k < p; ++k) y[k] *= inv;
  std::vector<Var> saved(inputs.begin(), inputs.end());
  return t.record(std::move(y), [saved = std::move(saved), inv](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    for (Var v : saved) {
      Tensor& gv = tp.grad(v);
      for (std::size_t k = 0; k < g.size(); ++k) gv[k] += g[k] * inv;
    }
  });
}

Var sum(Tape& t, Var a) {
  const Tensor& A = t.value(a);
  double s = 0.0;
  for (double v : A.data()) s += v;
  return t.record(Tensor::scalar(s), [a](Tape& tp, Var self) {
    const double g = tp.grad(self)[0];
    for (double& v : tp.grad(a).data()) v += g;
  });
}

Var stack_rows(Tape& t, std::span<const Var> rows) {
  if (rows.empty()) throw Error("stack_rows of an empty list");
  const std::size_t p = t.value(rows[0]).size();
  Tensor y({rows.size(), p});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Tensor& r = t.value(rows[i]);
    require(r.size() == p, "stack_rows");
    std::copy(r.data().begin(), r.data().end(), y.row(i).begin());
  }
  std::vector<Var> saved(rows.begin(), rows.end());
  return t.record(std::move(y), [saved = std::move(saved)](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    for (std::size_t i = 0; i < saved.size(); ++i) {
      auto gi = g.row(i);
      Tensor& gv = tp.grad(saved[i]);
      for (std::size_t k = 0; k < gi.size(); ++k) gv[k] += gi[k];
    }
  });
}

void propagate_into(const Tensor& h, const TransitionMatrix& transition, Tensor& out) {
  const std::size_t n = transition.size();
  for (std::size_t j = 0; j < n; ++j) {
    auto hj = h.row(j);
    transition.for_each_in_row(j, [&](std::size_t i, double tji) {
      auto oi = out.row(i);
      for (std::size_t k = 0; k < hj.size(); ++k) oi[k] += tji * hj[k];
    });
  }
}

Var propagate(Tape& t, Var h, const TransitionMatrix& transition) {
  const Tensor& H = t.value(h);
  require(H.rank() == 2 && H.rows() == transition.size(), "propagate");
  Tensor y(H.shape());
  propagate_into(H, transition, y);
  return t.record(std::move(y), [h, &transition](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    Tensor& gh = tp.grad(h);
    // d h_j += sum_i t_ji d out_i
    for (std::size_t j = 0; j < transition.size(); ++j) {
      auto ghj = gh.row(j);
      transition.for_each_in_row(j, [&](std::size_t i, double tji) {
        auto gi = g.row(i);
        for (std::size_t k = 0; k < ghj.size(); ++k) ghj[k] += tji * gi[k];
      });
    }
  });
}

Var matmul_nt(Tape& t, Var a, Var b) {
  const Tensor& A = t.value(a);
  const Tensor& B = t.value(b);
  require(A.rank() == 2 && B.rank() == 2 && A.cols() == B.cols(), "matmul_nt");
  Tensor y({A.rows(), B.rows()});
  for (std::size_t i = 0; i < A.rows(); ++i) {
    auto ai = A.row(i);
    for (std::size_t k = 0; k < B.rows(); ++k) {
      auto bk = B.row(k);
      double s = 0.0;
      for (std::size_t c = 0; c < ai.size(); ++c) s += ai[c] * bk[c];
      y.at(i, k) = s;
    }
  }
  return t.record(std::move(y), [a, b](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    const Tensor& A = tp.value(a);
    const Tensor& B = tp.value(b);
    Tensor& ga = tp.grad(a);
    Tensor& gb = tp.grad(b);
    for (std::size_t i = 0; i < A.rows(); ++i) {
      auto ai = A.row(i);
      auto gai = ga.row(i);
      for (std::size_t k = 0; k < B.rows(); ++k) {
        const double gik = g.at(i, k);
        if (gik == 0.0) continue;
        auto bk = B.row(k);
        auto gbk = gb.row(k);
        for (std::size_t c = 0; c < ai.size(); ++c) {
          gai[c] += gik * bk[c];
          gbk[c] += gik * ai[c];
        }
      }
    }
  });
}

std::vector<double> softmax(std::span<const double> logits) {
  for (double z : logits)
    if (!std::isfinite(z)) throw Error("non-finite logit");
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double z = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) z += (p[k] = std::exp(logits[k] - mx));
  for (double& v : p) v /= z;
  return p;
}

SoftmaxXent softmax_xent(std::span<const double> logits, std::span<const double> target) {
  if (logits.empty() || logits.size() != target.size()) throw Error("softmax_xent: logits and target differ in length");
  for (double z : logits)
    if (!std::isfinite(z)) throw Error("non-finite logit");
  const double mx = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double l : logits) z += std::exp(l - mx);
  const double lse = mx + std::log(z);
  SoftmaxXent out{0.0, softmax(logits)};
  for (std::size_t k = 0; k < logits.size(); ++k)
    if (target[k] != 0.0) out.loss += target[k] * (lse - logits[k]);
  return out;
}

Var softmax_xent_rows(Tape& t, Var logits, const Tensor& targets, std::span<const std::size_t> rows) {
  const Tensor& Z = t.value(logits);
  require(Z.rank() == 2 && targets.same_shape(Z), "softmax_xent_rows");
  if (rows.empty()) throw Error("softmax_xent_rows: no supervised rows");
  const double inv = 1.0 / static_cast<double>(rows.size());
  double loss = 0.0;
  Tensor probs(Z.shape());
  for (std::size_t i : rows) {
    auto r = softmax_xent(Z.row(i), targets.row(i));
    loss += r.loss;
    std::copy(r.probabilities.begin(), r.probabilities.end(), probs.row(i).begin());
  }
  std::vector<std::size_t> saved(rows.begin(), rows.end());
  return t.record(Tensor::scalar(loss * inv),
                  [logits, &targets, saved = std::move(saved), probs = std::move(probs), inv](Tape& tp, Var self) {
                    const double g = tp.grad(self)[0] * inv;
                    Tensor& gz = tp.grad(logits);
                    for (std::size_t i : saved) {
                      auto gi = gz.row(i);
                      auto pi = probs.row(i);
                      auto ti = targets.row(i);
                      // d/dz of -sum_k l_k log softmax(z)_k is (sum_k l_k) p - l
                      double mass = 0.0;
                      for (double v : ti) mass += v;
                      for (std::size_t k = 0; k < gi.size(); ++k) gi[k] += g * (mass * pi[k] - ti[k]);
                    }
                  });
}

}  // namespace cone::nn
