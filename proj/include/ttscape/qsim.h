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

#pragma once

// Dense statevector simulator for small landscape oracles.
//
// Bit convention: qubit q is bit q of the basis index x (qubit 0 is the
// least significant bit). Bitstrings are written most significant qubit
// first, so "0011" is x = 3 with qubits 0 and 1 set.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ttscape::qsim {

inline constexpr std::size_t kMaxQubits = 16;

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 1.0;
};

/// Undirected weighted graph on vertices 0..n-1, stored with u < v.
class Graph {
 public:
  Graph(std::size_t n_vertices, std::vector<Edge> edges);

  std::size_t n_vertices() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  static Graph complete(std::size_t n);

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
};

/// Parses "u v [w]" lines; '#' starts a comment. The vertex count is one more
/// than the largest vertex mentioned unless `n_vertices` is given.
Graph parse_edge_list(std::istream& in, std::size_t n_vertices = 0);
Graph load_edge_list(const std::filesystem::path& path, std::size_t n_vertices = 0);

/// Real diagonal of a problem Hamiltonian: diag[x] = <x|H|x>.
struct DiagonalObservable {
  std::size_t n_qubits = 0;
  std::vector<double> diag;

  DiagonalObservable() = default;
  DiagonalObservable(std::size_t n_qubits, std::vector<double> diag);
};

struct StateVector {
  std::size_t n_qubits = 0;
  std::vector<std::complex<double>> amplitudes;

  double norm() const;
};

/// diag[x] = total weight of edges cut by bipartition x.
DiagonalObservable maxcut_observable(const Graph& graph);

/// diag[x] = (popcount(x) - budget)^2.
DiagonalObservable budget_penalty_observable(std::size_t n_qubits, std::size_t budget);

/// diag[x] = risk_factor * x^T cov x - returns^T x for binary x.
DiagonalObservable portfolio_cost_observable(std::span<const double> returns,
                                             const std::vector<std::vector<double>>& covariance,
                                             double risk_factor);

/// a + lambda * b.
DiagonalObservable combine_observables(const DiagonalObservable& a,
                                       const DiagonalObservable& b, double lambda);

struct PortfolioInstance {
  std::size_t n = 0;
  std::vector<double> returns;
  std::vector<std::vector<double>> covariance;
  double risk_factor = 1.0;
  std::size_t budget = 0;

  DiagonalObservable cost() const;
  DiagonalObservable penalty() const;
  DiagonalObservable penalized(double lambda) const;
};

/// JSON object with keys n, returns, covariance, risk_factor, budget.
PortfolioInstance parse_portfolio(std::string_view json_text);
PortfolioInstance load_portfolio(const std::filesystem::path& path);

/// The 4-asset instance shipped with the repository (configs/portfolio4.json).
PortfolioInstance default_portfolio();

/// |+>^n evolved by p layers of exp(-i gamma_j C) then exp(-i beta_j sum X).
/// `params` is ordered (gamma_1, beta_1, ..., gamma_p, beta_p).
StateVector qaoa_state(const DiagonalObservable& cost, std::span<const double> params);

enum class Axis { X, Y, Z };

struct Rotation {
  Axis axis = Axis::Y;
  std::size_t qubit = 0;
};

/// Parses "X0", "y3", ... into a rotation.
Rotation parse_rotation(std::string_view token);

struct QaoaAnsatz {
  std::size_t p = 1;
  DiagonalObservable cost;
};

/// Hadamard layer on |0..0>, then the rotations in order. The rotation list is
/// split into layers at every point where the qubit index does not increase;
/// a CZ chain CZ(0,1) CZ(1,2) ... CZ(n-2,n-1) follows every layer.
/// Each rotation is exp(-i theta/2 sigma_axis).
struct RotationalAnsatz {
  std::size_t n_qubits = 1;
  std::vector<Rotation> layout;
};

using AnsatzSpec = std::variant<QaoaAnsatz, RotationalAnsatz>;

std::size_t n_params(const AnsatzSpec& spec);
std::size_t n_qubits(const AnsatzSpec& spec);

StateVector rotational_state(const RotationalAnsatz& spec, std::span<const double> params);

/// Dispatches on the ansatz kind.
StateVector prepare_state(const AnsatzSpec& spec, std::span<const double> params);

/// sum_x |alpha_x|^2 C_x.
double expectation(const StateVector& state, const DiagonalObservable& obs);

/// |alpha_x|^2 for a bitstring written most significant qubit first.
double basis_probability(const StateVector& state, std::string_view bitstring);
double basis_probability(const StateVector& state, std::uint64_t x);

/// Basis index -> bitstring (most significant qubit first) and back.
std::string to_bitstring(std::uint64_t x, std::size_t n_qubits);
std::uint64_t parse_bitstring(std::string_view bits, std::size_t n_qubits);

}  // namespace ttscape::qsim
