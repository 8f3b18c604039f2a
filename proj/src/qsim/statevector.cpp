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

#include <array>
#include <cmath>

#include <fmt/format.h>

#include "ttscape/error.h"
#include "ttscape/qsim.h"

namespace ttscape::qsim {
namespace {

using cplx = std::complex<double>;
using Gate = std::array<cplx, 4>;  // row-major 2x2

void apply_1q(StateVector& s, std::size_t q, const Gate& g) {
  const std::size_t stride = std::size_t{1} << q;
  const std::size_t dim = s.amplitudes.size();
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t off = 0; off < stride; ++off) {
      cplx& a0 = s.amplitudes[base + off];
      cplx& a1 = s.amplitudes[base + off + stride];
      const cplx x0 = a0;
      const cplx x1 = a1;
      a0 = g[0] * x0 + g[1] * x1;
      a1 = g[2] * x0 + g[3] * x1;
    }
  }
}

void apply_cz(StateVector& s, std::size_t a, std::size_t b) {
  const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
  for (std::size_t x = 0; x < s.amplitudes.size(); ++x) {
    if ((x & mask) == mask) s.amplitudes[x] = -s.amplitudes[x];
  }
}

void apply_cz_chain(StateVector& s) {
  for (std::size_t q = 0; q + 1 < s.n_qubits; ++q) apply_cz(s, q, q + 1);
}

Gate rotation_gate(Axis axis, double theta) {
  const double c = std::cos(theta / 2);
  const double sn = std::sin(theta / 2);
  const cplx i{0.0, 1.0};
  switch (axis) {
    case Axis::X:
      return {c, -i * sn, -i * sn, c};
    case Axis::Y:
      return {c, -sn, sn, c};
    case Axis::Z:
      return {std::exp(-i * (theta / 2)), 0.0, 0.0, std::exp(i * (theta / 2))};
  }
  throw InputError("invalid rotation axis");
}

StateVector uniform_state(std::size_t n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  return {n_qubits, std::vector<cplx>(dim, cplx{amp, 0.0})};
}

void normalize(StateVector& s) {
  const double n = s.norm();
  for (cplx& a : s.amplitudes) a /= n;
}

void check_qubits(std::size_t n) {
  if (n < 1 || n > kMaxQubits) {
    throw InputError(fmt::format("qubit count must be 1..{}, got {}", kMaxQubits, n));
  }
}

}  // namespace

double StateVector::norm() const {
  double sum = 0.0;
  for (const cplx& a : amplitudes) sum += std::norm(a);
  return std::sqrt(sum);
}

StateVector qaoa_state(const DiagonalObservable& cost, std::span<const double> params) {
  check_qubits(cost.n_qubits);
  if (params.empty() || params.size() % 2 != 0) {
    throw InputError(fmt::format("QAOA needs 2p parameters with p >= 1, got {}", params.size()));
  }
  StateVector s = uniform_state(cost.n_qubits);
  const std::size_t p = params.size() / 2;
  for (std::size_t layer = 0; layer < p; ++layer) {
    const double gamma = params[2 * layer];
    const double beta = params[2 * layer + 1];
    for (std::size_t x = 0; x < s.amplitudes.size(); ++x) {
      s.amplitudes[x] *= std::polar(1.0, -gamma * cost.diag[x]);
    }
    const cplx c{std::cos(beta), 0.0};
    const cplx mis{0.0, -std::sin(beta)};
    const Gate mixer{c, mis, mis, c};
    for (std::size_t q = 0; q < s.n_qubits; ++q) apply_1q(s, q, mixer);
  }
  normalize(s);
  return s;
}

Rotation parse_rotation(std::string_view token) {
  if (token.size() < 2) throw InputError(fmt::format("bad rotation '{}'", token));
  Rotation r;
  switch (token[0]) {
    case 'X': case 'x': r.axis = Axis::X; break;
    case 'Y': case 'y': r.axis = Axis::Y; break;
    case 'Z': case 'z': r.axis = Axis::Z; break;
    default:
      throw InputError(fmt::format("rotation '{}': axis must be X, Y or Z", token));
  }
  std::size_t q = 0;
  for (char ch : token.substr(1)) {
    if (ch < '0' || ch > '9') throw InputError(fmt::format("rotation '{}': bad qubit", token));
    q = q * 10 + static_cast<std::size_t>(ch - '0');
  }
  r.qubit = q;
  return r;
}

std::size_t n_params(const AnsatzSpec& spec) {
  if (const auto* qaoa = std::get_if<QaoaAnsatz>(&spec)) return 2 * qaoa->p;
  return std::get<RotationalAnsatz>(spec).layout.size();
}

std::size_t n_qubits(const AnsatzSpec& spec) {
  if (const auto* qaoa = std::get_if<QaoaAnsatz>(&spec)) return qaoa->cost.n_qubits;
  return std::get<RotationalAnsatz>(spec).n_qubits;
}

StateVector rotational_state(const RotationalAnsatz& spec, std::span<const double> params) {
  check_qubits(spec.n_qubits);
  if (params.size() != spec.layout.size()) {
    throw InputError(fmt::format("rotational ansatz needs {} parameters, got {}",
                                 spec.layout.size(), params.size()));
  }
  StateVector s = uniform_state(spec.n_qubits);  // H layer on |0...0>
  for (std::size_t k = 0; k < spec.layout.size(); ++k) {
    const Rotation& r = spec.layout[k];
    if (r.qubit >= spec.n_qubits) {
      throw InputError(fmt::format("rotation on qubit {} but ansatz has {} qubits", r.qubit,
                                   spec.n_qubits));
    }
    if (r.axis != Axis::X && r.axis != Axis::Y && r.axis != Axis::Z) {
      throw InputError("invalid rotation axis");
    }
    apply_1q(s, r.qubit, rotation_gate(r.axis, params[k]));
    const bool layer_ends =
        k + 1 == spec.layout.size() || spec.layout[k + 1].qubit <= r.qubit;
    if (layer_ends) apply_cz_chain(s);
  }
  normalize(s);
  return s;
}

StateVector prepare_state(const AnsatzSpec& spec, std::span<const double> params) {
  if (const auto* qaoa = std::get_if<QaoaAnsatz>(&spec)) {
    if (params.size() != 2 * qaoa->p) {
      throw InputError(fmt::format("QAOA p={} needs {} parameters, got {}", qaoa->p,
                                   2 * qaoa->p, params.size()));
    }
    return qaoa_state(qaoa->cost, params);
  }
  return rotational_state(std::get<RotationalAnsatz>(spec), params);
}

double expectation(const StateVector& state, const DiagonalObservable& obs) {
  if (state.n_qubits != obs.n_qubits || state.amplitudes.size() != obs.diag.size()) {
    throw InputError("expectation: state and observable qubit counts differ");
  }
  double sum = 0.0;
  for (std::size_t x = 0; x < obs.diag.size(); ++x) {
    sum += std::norm(state.amplitudes[x]) * obs.diag[x];
  }
  return sum;
}

double basis_probability(const StateVector& state, std::uint64_t x) {
  if (x >= state.amplitudes.size()) {
    throw InputError(fmt::format("basis index {} out of range for {} qubits", x, state.n_qubits));
  }
  return std::norm(state.amplitudes[x]);
}

double basis_probability(const StateVector& state, std::string_view bitstring) {
  return basis_probability(state, parse_bitstring(bitstring, state.n_qubits));
}

std::string to_bitstring(std::uint64_t x, std::size_t n_qubits) {
  std::string s(n_qubits, '0');
  for (std::size_t q = 0; q < n_qubits; ++q) {
    if ((x >> q) & 1U) s[n_qubits - 1 - q] = '1';
  }
  return s;
}

std::uint64_t parse_bitstring(std::string_view bits, std::size_t n_qubits) {
  if (bits.size() != n_qubits) {
    throw InputError(fmt::format("bitstring '{}' has length {}, expected {}", bits, bits.size(),
                                 n_qubits));
  }
  std::uint64_t x = 0;
  for (char ch : bits) {
    if (ch != '0' && ch != '1') {
      throw InputError(fmt::format("bitstring '{}' contains '{}'", bits, ch));
    }
    x = (x << 1) | static_cast<std::uint64_t>(ch == '1');
  }
  return x;
}

}  // namespace ttscape::qsim
