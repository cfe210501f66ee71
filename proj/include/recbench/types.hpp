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

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace recbench {

// All activations, weights and embedding rows are stored row-major so that
// one sample (or one embedding row) is a contiguous run of scalars.
template <typename Scalar>
using DenseMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using MatrixF = DenseMatrix<float>;
using RowVectorF = RowVector<float>;

using Index = Eigen::Index;

/// Invalid configuration or arguments (maps to exit status 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes that do not agree.
class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An embedding id outside [0, rows) of its table.
class LookupIndexError : public std::out_of_range {
 public:
  LookupIndexError(std::size_t table, std::size_t position, std::int64_t id,
                   std::int64_t rows)
      : std::out_of_range("embedding id " + std::to_string(id) +
                          " out of range [0, " + std::to_string(rows) +
                          ") in table " + std::to_string(table) +
                          " at position " + std::to_string(position)),
        table_(table),
        position_(position),
        id_(id) {}

  std::size_t table() const noexcept { return table_; }
  std::size_t position() const noexcept { return position_; }
  std::int64_t id() const noexcept { return id_; }

 private:
  std::size_t table_;
  std::size_t position_;
  std::int64_t id_;
};

}  // namespace recbench
