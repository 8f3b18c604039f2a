// Copyright 2026 The ttscape Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ttscape/tensor_train.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "ttscape/error.h"

namespace ttscape {
namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMap = Eigen::Map<RowMatrix>;
using ConstRowMap = Eigen::Map<const RowMatrix>;

std::vector<double> to_vector(const RowMatrix& m) {
  return {m.data(), m.data() + m.size()};
}

// Number of leading singular values to keep: sigma_j >= threshold * ||sigma||,
// at least one, at most max_rank.
std::size_t truncation_rank(const Eigen::VectorXd& sigma, double threshold,
                            std::optional<std::size_t> max_rank) {
  const double norm = sigma.norm();
  std::size_t keep = 0;
  if (norm > 0.0) {
    const double cutoff = threshold * norm;
    while (keep < static_cast<std::size_t>(sigma.size()) &&
           sigma[static_cast<Eigen::Index>(keep)] >= cutoff) {
      ++keep;
    }
  }
  keep = std::max<std::size_t>(keep, 1);
  if (max_rank) keep = std::min(keep, *max_rank);
  return keep;
}

struct TruncatedSvd {
  RowMatrix u;   // rows x r
  RowMatrix sv;  // r x cols, singular values folded in
};

TruncatedSvd truncated_svd(const Eigen::Ref<const RowMatrix>& a,
                           double threshold,
                           std::optional<std::size_t> max_rank) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const auto r =
      static_cast<Eigen::Index>(truncation_rank(sigma, threshold, max_rank));
  TruncatedSvd out;
  out.u = svd.matrixU().leftCols(r);
  out.sv = sigma.head(r).asDiagonal() * svd.matrixV().leftCols(r).transpose();
  return out;
}

void check_finite_core(const Core& c) {
  for (double v : c.data) {
    if (!std::isfinite(v)) throw InputError("tensor train core has non-finite entry");
  }
}

}  // namespace

Core::Core(std::size_t left, std::size_t phys, std::size_t right)
    : left(left), phys(phys), right(right), data(left * phys * right, 0.0) {}

Core::Core(std::size_t left, std::size_t phys, std::size_t right,
           std::vector<double> data)
    : left(left), phys(phys), right(right), data(std::move(data)) {
  if (this->data.size() != left * phys * right) {
    throw InputError(fmt::format("core ({},{},{}) needs {} entries, got {}",
                                 left, phys, right, left * phys * right,
                                 this->data.size()));
  }
}

TensorTrain::TensorTrain(std::vector<Core> cores) : cores_(std::move(cores)) {
  if (cores_.empty()) throw InputError("tensor train needs at least one core");
  if (cores_.front().left != 1 || cores_.back().right != 1) {
    throw InputError("boundary bond dimensions must be 1");
  }
  for (std::size_t k = 0; k < cores_.size(); ++k) {
    const Core& c = cores_[k];
    if (c.left == 0 || c.phys == 0 || c.right == 0) {
      throw InputError(fmt::format("core {} has a zero dimension", k));
    }
    if (c.data.size() != c.left * c.phys * c.right) {
      throw InputError(fmt::format("core {} has wrong entry count", k));
    }
    if (k + 1 < cores_.size() && c.right != cores_[k + 1].left) {
      throw InputError(fmt::format("bond mismatch between cores {} and {}: {} vs {}",
                                   k, k + 1, c.right, cores_[k + 1].left));
    }
    check_finite_core(c);
  }
}

Shape TensorTrain::dims() const {
  Shape dims;
  dims.reserve(cores_.size());
  for (const Core& c : cores_) dims.push_back(c.phys);
  return dims;
}

std::vector<std::size_t> TensorTrain::ranks() const {
  std::vector<std::size_t> r;
  for (std::size_t k = 0; k + 1 < cores_.size(); ++k) r.push_back(cores_[k].right);
  return r;
}

std::size_t TensorTrain::parameter_count() const {
  std::size_t n = 0;
  for (const Core& c : cores_) n += c.left * c.phys * c.right;
  return n;
}

double TensorTrain::evaluate(std::span<const std::size_t> index) const {
  if (index.size() != cores_.size()) {
    throw InputError(fmt::format("index has {} axes, train has {}", index.size(),
                                 cores_.size()));
  }
  // Row vector carried through the chain.
  std::vector<double> v{1.0};
  std::vector<double> next;
  for (std::size_t k = 0; k < cores_.size(); ++k) {
    const Core& c = cores_[k];
    if (index[k] >= c.phys) {
      throw InputError(fmt::format("index {} on axis {} out of bounds (size {})",
                                   index[k], k, c.phys));
    }
    next.assign(c.right, 0.0);
    const double* s = c.slice(index[k]);
    for (std::size_t a = 0; a < c.left; ++a) {
      const double va = v[a];
      const double* row = s + a * c.phys * c.right;
      for (std::size_t b = 0; b < c.right; ++b) next[b] += va * row[b];
    }
    v.swap(next);
  }
  return v[0];
}

DenseTensor TensorTrain::to_dense(std::size_t cap) const {
  const Shape shape = dims();
  const std::size_t total = shape_size(shape);
  if (total >= cap) {
    throw InputError(fmt::format(
        "dense materialization needs {} entries, cap is {}", total, cap));
  }
  // partial is (prod of dims so far) x (current bond), row-major.
  RowMatrix partial = ConstRowMap(cores_[0].data.data(),
                                  static_cast<Eigen::Index>(cores_[0].phys),
                                  static_cast<Eigen::Index>(cores_[0].right));
  for (std::size_t k = 1; k < cores_.size(); ++k) {
    const Core& c = cores_[k];
    ConstRowMap m(c.data.data(), static_cast<Eigen::Index>(c.left),
                  static_cast<Eigen::Index>(c.phys * c.right));
    RowMatrix product = partial * m;
    partial = RowMap(product.data(), product.rows() * static_cast<Eigen::Index>(c.phys),
                     static_cast<Eigen::Index>(c.right));
  }
  return DenseTensor(shape, to_vector(partial));
}

double TensorTrain::core_norm_squared() const {
  double sum = 0.0;
  for (const Core& c : cores_) {
    for (double v : c.data) sum += v * v;
  }
  return sum;
}

TensorTrain tt_from_dense(const DenseTensor& dense, double threshold) {
  if (!(threshold >= 0.0) || !std::isfinite(threshold)) {
    throw InputError("truncation threshold must be finite and >= 0");
  }
  const Shape& shape = dense.shape();
  const std::size_t d = shape.size();
  std::vector<Core> cores;
  cores.reserve(d);

  std::vector<double> rest(dense.values().begin(), dense.values().end());
  std::size_t r_prev = 1;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    const auto rows = static_cast<Eigen::Index>(r_prev * shape[k]);
    const auto cols = static_cast<Eigen::Index>(rest.size()) / rows;
    ConstRowMap unfolding(rest.data(), rows, cols);
    TruncatedSvd svd = truncated_svd(unfolding, threshold, std::nullopt);
    const auto r = static_cast<std::size_t>(svd.u.cols());
    cores.emplace_back(r_prev, shape[k], r, to_vector(svd.u));
    rest = to_vector(svd.sv);
    r_prev = r;
  }
  cores.emplace_back(r_prev, shape[d - 1], 1, std::move(rest));
  return TensorTrain(std::move(cores));
}

TensorTrain tt_add(const TensorTrain& a, const TensorTrain& b) {
  if (a.dims() != b.dims()) throw InputError("tt_add: physical dims differ");
  const std::size_t d = a.order();
  if (d == 1) {
    Core c = a.core(0);
    for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] += b.core(0).data[i];
    return TensorTrain({std::move(c)});
  }
  std::vector<Core> cores;
  cores.reserve(d);
  for (std::size_t k = 0; k < d; ++k) {
    const Core& ca = a.core(k);
    const Core& cb = b.core(k);
    const std::size_t left = (k == 0) ? 1 : ca.left + cb.left;
    const std::size_t right = (k + 1 == d) ? 1 : ca.right + cb.right;
    Core c(left, ca.phys, right);
    // Offsets of the b block; boundary cores share their outer bond.
    const std::size_t lo = (k == 0) ? 0 : ca.left;
    const std::size_t ro = (k + 1 == d) ? 0 : ca.right;
    for (std::size_t i = 0; i < ca.phys; ++i) {
      for (std::size_t x = 0; x < ca.left; ++x)
        for (std::size_t y = 0; y < ca.right; ++y) c(x, i, y) = ca(x, i, y);
      for (std::size_t x = 0; x < cb.left; ++x)
        for (std::size_t y = 0; y < cb.right; ++y) c(lo + x, i, ro + y) = cb(x, i, y);
    }
    cores.push_back(std::move(c));
  }
  return TensorTrain(std::move(cores));
}

TensorTrain tt_scale(const TensorTrain& tt, double factor) {
  if (!std::isfinite(factor)) throw InputError("tt_scale: factor must be finite");
  std::vector<Core> cores = tt.cores();
  for (double& v : cores[0].data) v *= factor;
  return TensorTrain(std::move(cores));
}

TensorTrain tt_round(const TensorTrain& tt, const RoundOptions& options) {
  if (options.max_rank && *options.max_rank < 1) {
    throw InputError("tt_round: max_rank must be >= 1");
  }
  if (!(options.threshold >= 0.0) || !std::isfinite(options.threshold)) {
    throw InputError("tt_round: threshold must be finite and >= 0");
  }
  std::vector<Core> cores = tt.cores();
  const std::size_t d = cores.size();
  if (d == 1) return TensorTrain(std::move(cores));

  // Right-to-left orthogonalization: core k becomes row-orthonormal in its
  // (left, phys*right) unfolding, the triangular factor moves left.
  for (std::size_t k = d - 1; k > 0; --k) {
    Core& c = cores[k];
    ConstRowMap m(c.data.data(), static_cast<Eigen::Index>(c.left),
                  static_cast<Eigen::Index>(c.phys * c.right));
    const Eigen::MatrixXd mt = m.transpose();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(mt);
    const Eigen::Index r = std::min(mt.rows(), mt.cols());
    const Eigen::MatrixXd q =
        qr.householderQ() * Eigen::MatrixXd::Identity(mt.rows(), r);
    const Eigen::MatrixXd rfac =
        qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    RowMatrix new_c = q.transpose();
    Core& prev = cores[k - 1];
    ConstRowMap pm(prev.data.data(), static_cast<Eigen::Index>(prev.left * prev.phys),
                   static_cast<Eigen::Index>(prev.right));
    RowMatrix new_prev = pm * rfac.transpose();
    prev = Core(prev.left, prev.phys, static_cast<std::size_t>(r), to_vector(new_prev));
    c = Core(static_cast<std::size_t>(r), c.phys, c.right, to_vector(new_c));
  }

  // Left-to-right truncation.
  for (std::size_t k = 0; k + 1 < d; ++k) {
    Core& c = cores[k];
    ConstRowMap m(c.data.data(), static_cast<Eigen::Index>(c.left * c.phys),
                  static_cast<Eigen::Index>(c.right));
    TruncatedSvd svd = truncated_svd(m, options.threshold, options.max_rank);
    const auto r = static_cast<std::size_t>(svd.u.cols());
    Core& next = cores[k + 1];
    ConstRowMap nm(next.data.data(), static_cast<Eigen::Index>(next.left),
                   static_cast<Eigen::Index>(next.phys * next.right));
    RowMatrix new_next = svd.sv * nm;
    c = Core(c.left, c.phys, r, to_vector(svd.u));
    next = Core(r, next.phys, next.right, to_vector(new_next));
  }
  return TensorTrain(std::move(cores));
}

TensorTrain tt_zeros(const Shape& dims) { return tt_constant(dims, 0.0); }

TensorTrain tt_constant(const Shape& dims, double value) {
  if (dims.empty()) throw InputError("tensor train needs at least one axis");
  std::vector<Core> cores;
  cores.reserve(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) {
    cores.emplace_back(1, dims[k], 1,
                       std::vector<double>(dims[k], k == 0 ? value : 1.0));
  }
  return TensorTrain(std::move(cores));
}

RankProfile rank_profile(const DenseTensor& dense,
                         std::span<const double> thresholds) {
  RankProfile profile;
  for (double t : thresholds) {
    if (!(t > 0.0)) throw InputError("rank_profile thresholds must be positive");
    const TensorTrain tt = tt_from_dense(dense, t);
    RankProfileRow row;
    row.threshold = t;
    row.ranks = tt.ranks();
    row.dense_entries = dense.size();
    row.tt_parameters = tt.parameter_count();
    row.space_reduction = static_cast<double>(row.dense_entries) /
                          static_cast<double>(row.tt_parameters);
    profile.rows.push_back(std::move(row));
  }
  return profile;
}

}  // namespace ttscape
