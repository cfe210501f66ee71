// Copyright 2026 The recbench Authors. All Rights Reserved.
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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "recbench/types.hpp"

namespace recbench {

/// R x C embedding table, one row per categorical id.
template <typename Scalar>
struct EmbeddingTable {
  DenseMatrix<Scalar> values;

  Index rows() const { return values.rows(); }
  Index dim() const { return values.cols(); }
};

/// Input of one SparseLengthsSum: K slice lengths over M ids. Slice k pools
/// ids[offset_k, offset_k + lengths[k]) into output row k.
struct SparseLookupBatch {
  std::vector<std::int64_t> lengths;
  std::vector<std::int64_t> ids;

  std::int64_t num_outputs() const { return static_cast<std::int64_t>(lengths.size()); }
};

/// Checks lengths against ids and every id against `rows`.
inline void check_lookup_batch(const SparseLookupBatch& batch, std::int64_t rows,
                               std::size_t table_index = 0) {
  std::int64_t total = 0;
  for (std::int64_t len : batch.lengths) {
    if (len < 0) throw ShapeError("negative slice length in table " + std::to_string(table_index));
    total += len;
  }
  if (total != static_cast<std::int64_t>(batch.ids.size())) {
    throw ShapeError("lengths sum to " + std::to_string(total) + " but table " +
                     std::to_string(table_index) + " has " +
                     std::to_string(batch.ids.size()) + " ids");
  }
  for (std::size_t p = 0; p < batch.ids.size(); ++p) {
    const std::int64_t id = batch.ids[p];
    if (id < 0 || id >= rows) throw LookupIndexError(table_index, p, id, rows);
  }
}

/// Rows requested this many ids ahead of the one being summed.
inline constexpr std::size_t kSlsPrefetchDistance = 16;

template <typename Scalar>
inline void prefetch_row(const Scalar* row, Index dim) {
  const char* p = reinterpret_cast<const char*>(row);
  const char* end = p + dim * static_cast<Index>(sizeof(Scalar));
  for (; p < end; p += 64) __builtin_prefetch(p);
}

/// SparseLengthsSum. Out[k] = sum of table rows named by the k-th slice of
/// ids; an empty slice gives a zero row. Ids are range-checked while
/// gathering, so a bad id throws before any output is returned.
template <typename Scalar>
DenseMatrix<Scalar> sls(const EmbeddingTable<Scalar>& table, const SparseLookupBatch& batch,
                        std::size_t table_index = 0) {
  const Index dim = table.dim();
  const Index rows = table.rows();
  DenseMatrix<Scalar> out = DenseMatrix<Scalar>::Zero(batch.num_outputs(), dim);

  const Scalar* emb = table.values.data();
  const std::size_t num_ids = batch.ids.size();
  std::size_t current = 0;
  Index out_row = 0;
  for (std::int64_t len : batch.lengths) {
    if (len < 0 || current + static_cast<std::size_t>(len) > num_ids) {
      throw ShapeError("slice lengths overrun the id list of table " +
                       std::to_string(table_index));
    }
    Scalar* dst = out.data() + out_row * dim;
    for (std::size_t p = current; p < current + static_cast<std::size_t>(len); ++p) {
      if (p + kSlsPrefetchDistance < num_ids) {
        const std::int64_t ahead = batch.ids[p + kSlsPrefetchDistance];
        if (ahead >= 0 && ahead < rows) prefetch_row(emb + ahead * dim, dim);
      }
      const std::int64_t id = batch.ids[p];
      if (id < 0 || id >= rows) throw LookupIndexError(table_index, p, id, rows);
      const Scalar* src = emb + id * dim;
      for (Index i = 0; i < dim; ++i) dst[i] += src[i];
    }
    ++out_row;
    current += static_cast<std::size_t>(len);
  }
  if (current != num_ids) {
    throw ShapeError("lengths sum to " + std::to_string(current) + " but table " +
                     std::to_string(table_index) + " has " + std::to_string(num_ids) + " ids");
  }
  return out;
}

namespace detail {

inline constexpr Index kGemmBlockIn = 128;
inline constexpr Index kGemmBlockOut = 512;

// y[b, o_begin:o_end) += x[b, i_begin:i_end) * w[i_begin:i_end, o_begin:o_end)
// for rows b in [b_begin, b_begin + 4). The four output rows share each
// weight load.
template <typename Scalar>
inline void gemm_block4(const Scalar* x, Index ldx, const Scalar* w, Index ldw, Scalar* y,
                        Index ldy, Index i_begin, Index i_end, Index o_begin, Index o_end) {
  Scalar* y0 = y;
  Scalar* y1 = y + ldy;
  Scalar* y2 = y + 2 * ldy;
  Scalar* y3 = y + 3 * ldy;
  for (Index i = i_begin; i < i_end; ++i) {
    const Scalar a0 = x[i];
    const Scalar a1 = x[ldx + i];
    const Scalar a2 = x[2 * ldx + i];
    const Scalar a3 = x[3 * ldx + i];
    const Scalar* wr = w + i * ldw;
    for (Index o = o_begin; o < o_end; ++o) {
      const Scalar wv = wr[o];
      y0[o] += a0 * wv;
      y1[o] += a1 * wv;
      y2[o] += a2 * wv;
      y3[o] += a3 * wv;
    }
  }
}

template <typename Scalar>
inline void gemm_block1(const Scalar* x, const Scalar* w, Index ldw, Scalar* y, Index i_begin,
                        Index i_end, Index o_begin, Index o_end) {
  for (Index i = i_begin; i < i_end; ++i) {
    const Scalar a = x[i];
    const Scalar* wr = w + i * ldw;
    for (Index o = o_begin; o < o_end; ++o) y[o] += a * wr[o];
  }
}

}  // namespace detail

/// y = x * w + bias, with x: B x I, w: I x O, bias: 1 x O. Blocked over the
/// weight matrix so a tile of w stays cache resident across the batch.
template <typename Scalar>
DenseMatrix<Scalar> fc_forward(const DenseMatrix<Scalar>& x, const DenseMatrix<Scalar>& w,
                               const RowVector<Scalar>& bias) {
  if (x.cols() != w.rows() || w.cols() != bias.cols()) {
    throw ShapeError("fc_forward shape mismatch: x " + std::to_string(x.rows()) + "x" +
                     std::to_string(x.cols()) + ", w " + std::to_string(w.rows()) + "x" +
                     std::to_string(w.cols()) + ", bias " + std::to_string(bias.cols()));
  }
  const Index batch = x.rows();
  const Index in = w.rows();
  const Index out = w.cols();
  DenseMatrix<Scalar> y(batch, out);
  for (Index b = 0; b < batch; ++b) y.row(b) = bias;

  const Scalar* xp = x.data();
  const Scalar* wp = w.data();
  Scalar* yp = y.data();
  for (Index ob = 0; ob < out; ob += detail::kGemmBlockOut) {
    const Index oe = std::min(out, ob + detail::kGemmBlockOut);
    for (Index ib = 0; ib < in; ib += detail::kGemmBlockIn) {
      const Index ie = std::min(in, ib + detail::kGemmBlockIn);
      Index b = 0;
      for (; b + 4 <= batch; b += 4) {
        detail::gemm_block4(xp + b * in, in, wp, out, yp + b * out, out, ib, ie, ob, oe);
      }
      for (; b < batch; ++b) {
        detail::gemm_block1(xp + b * in, wp, out, yp + b * out, ib, ie, ob, oe);
      }
    }
  }
  return y;
}

template <typename Scalar>
void relu_inplace(DenseMatrix<Scalar>& x) {
  Scalar* p = x.data();
  const Index n = x.size();
  for (Index i = 0; i < n; ++i) p[i] = p[i] > Scalar(0) ? p[i] : Scalar(0);
}

template <typename Scalar>
DenseMatrix<Scalar> relu(DenseMatrix<Scalar> x) {
  relu_inplace(x);
  return x;
}

template <typename Scalar>
void sigmoid_inplace(DenseMatrix<Scalar>& x) {
  Scalar* p = x.data();
  const Index n = x.size();
  for (Index i = 0; i < n; ++i) p[i] = Scalar(1) / (Scalar(1) + std::exp(-p[i]));
}

template <typename Scalar>
DenseMatrix<Scalar> sigmoid(DenseMatrix<Scalar> x) {
  sigmoid_inplace(x);
  return x;
}

/// Column-wise concatenation of parts that share a row count; part order is
/// preserved.
template <typename Scalar>
DenseMatrix<Scalar> concat_columns(std::span<const DenseMatrix<Scalar>* const> parts) {
  if (parts.empty()) return DenseMatrix<Scalar>(0, 0);
  const Index rows = parts.front()->rows();
  Index cols = 0;
  for (const auto* p : parts) {
    if (p->rows() != rows) {
      throw ShapeError("concat row mismatch: " + std::to_string(p->rows()) + " vs " +
                       std::to_string(rows));
    }
    cols += p->cols();
  }
  DenseMatrix<Scalar> out(rows, cols);
  Index offset = 0;
  for (const auto* p : parts) {
    if (p->cols() > 0) out.middleCols(offset, p->cols()) = *p;
    offset += p->cols();
  }
  return out;
}

template <typename Scalar>
DenseMatrix<Scalar> concat_columns(const std::vector<DenseMatrix<Scalar>>& parts) {
  std::vector<const DenseMatrix<Scalar>*> ptrs;
  ptrs.reserve(parts.size());
  for (const auto& p : parts) ptrs.push_back(&p);
  return concat_columns<Scalar>(std::span<const DenseMatrix<Scalar>* const>(ptrs));
}

}  // namespace recbench
