#pragma once

#include <array>
#include <complex>
#include <vector>

#include "polynomial.hpp"

namespace bnf {

inline std::vector<size_t> row_major_strides(const std::vector<int>& shape) {
  std::vector<size_t> s(shape.size(), 1);
  for (int a = static_cast<int>(shape.size()) - 2; a >= 0; --a) s[a] = s[a + 1] * static_cast<size_t>(shape[a + 1]);
  return s;
}

// Visits every multi-index in row-major order; fn(offset, idx).
template <class Fn>
void for_each_index(const std::vector<int>& shape, Fn&& fn) {
  const int q = static_cast<int>(shape.size());
  size_t total = 1;
  for (int d : shape) total *= static_cast<size_t>(d);
  if (total == 0) return;
  std::array<int, kMaxDegree> idx{};
  for (size_t off = 0; off < total; ++off) {
    fn(off, idx.data());
    for (int a = q - 1; a >= 0; --a) {
      if (++idx[a] < shape[a]) break;
      idx[a] = 0;
    }
  }
}

// dst[sum_a idx_a * step_a] += scale * src[idx]
inline void scatter_permuted(const cplx* src, const std::vector<int>& shape, const std::vector<size_t>& step,
                             cplx* dst, cplx scale) {
  const int q = static_cast<int>(shape.size());
  size_t pos = 0;
  for_each_index(shape, [&](size_t off, const int* idx) {
    (void)idx;
    dst[pos] += scale * src[off];
    for (int a = q - 1; a >= 0; --a) {
      if (idx[a] + 1 < shape[a]) {
        pos += step[a];
        break;
      }
      pos -= static_cast<size_t>(shape[a] - 1) * step[a];
    }
  });
}

namespace detail {
// Contracts trailing axes (last first) down to axis `keep` inclusive left open.
inline const cplx* reduce_tail(const cplx* data, const std::vector<int>& shape, const std::vector<const cplx*>& x,
                               int keep, std::vector<cplx>& a, std::vector<cplx>& b, size_t& len) {
  const int q = static_cast<int>(shape.size());
  len = 1;
  for (int d : shape) len *= static_cast<size_t>(d);
  const cplx* cur = data;
  for (int ax = q - 1; ax > keep; --ax) {
    const size_t d = static_cast<size_t>(shape[ax]);
    const size_t outer = len / d;
    auto& dst = (cur == a.data()) ? b : a;
    dst.resize(outer);
    const cplx* xv = x[ax];
    for (size_t o = 0; o < outer; ++o) {
      cplx s = 0.0;
      const cplx* row = cur + o * d;
      for (size_t i = 0; i < d; ++i) s += row[i] * xv[i];
      dst[o] = s;
    }
    cur = dst.data();
    len = outer;
  }
  return cur;
}
}  // namespace detail

// sum_j t_j prod_a x_a[j_a]
inline cplx contract_all(const cplx* data, const std::vector<int>& shape, const std::vector<const cplx*>& x) {
  thread_local std::vector<cplx> a, b;
  size_t len;
  const cplx* cur = detail::reduce_tail(data, shape, x, 0, a, b, len);
  cplx s = 0.0;
  const cplx* xv = x[0];
  for (size_t i = 0; i < len; ++i) s += cur[i] * xv[i];
  return s;
}

// out[m] = sum over all axes but p of t_j prod_{a != p} x_a[j_a], with j_p = m
inline void contract_but(const cplx* data, const std::vector<int>& shape, const std::vector<const cplx*>& x, int p,
                         cplx* out) {
  thread_local std::vector<cplx> a, b, w, w2;
  size_t len;
  const cplx* cur = detail::reduce_tail(data, shape, x, p, a, b, len);
  const size_t dp = static_cast<size_t>(shape[p]);
  // front weights over axes 0..p-1
  w.assign(1, cplx(1.0, 0.0));
  for (int ax = 0; ax < p; ++ax) {
    const size_t d = static_cast<size_t>(shape[ax]);
    w2.resize(w.size() * d);
    for (size_t f = 0; f < w.size(); ++f)
      for (size_t i = 0; i < d; ++i) w2[f * d + i] = w[f] * x[ax][i];
    w.swap(w2);
  }
  for (size_t m = 0; m < dp; ++m) out[m] = 0.0;
  for (size_t f = 0; f < w.size(); ++f) {
    const cplx* row = cur + f * dp;
    for (size_t m = 0; m < dp; ++m) out[m] += w[f] * row[m];
  }
}

}  // namespace bnf
