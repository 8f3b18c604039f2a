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

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ttscape/error.h"
#include "ttscape/qsim.h"

namespace ttscape::qsim {
namespace {

std::size_t dimension(std::size_t n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw InputError(fmt::format("qubit count must be 1..{}, got {}", kMaxQubits, n_qubits));
  }
  return std::size_t{1} << n_qubits;
}

bool bit(std::size_t x, std::size_t q) { return ((x >> q) & 1U) != 0; }

}  // namespace

DiagonalObservable::DiagonalObservable(std::size_t n_qubits, std::vector<double> diag)
    : n_qubits(n_qubits), diag(std::move(diag)) {
  if (this->diag.size() != dimension(n_qubits)) {
    throw InputError(fmt::format("observable on {} qubits needs {} entries, got {}", n_qubits,
                                 dimension(n_qubits), this->diag.size()));
  }
  for (double v : this->diag) {
    if (!std::isfinite(v)) throw InputError("observable diagonal must be finite");
  }
}

DiagonalObservable maxcut_observable(const Graph& graph) {
  const std::size_t n = graph.n_vertices();
  std::vector<double> diag(dimension(n), 0.0);
  for (std::size_t x = 0; x < diag.size(); ++x) {
    for (const Edge& e : graph.edges()) {
      if (bit(x, e.u) != bit(x, e.v)) diag[x] += e.weight;
    }
  }
  return {n, std::move(diag)};
}

DiagonalObservable budget_penalty_observable(std::size_t n_qubits, std::size_t budget) {
  if (budget > n_qubits) {
    throw InputError(fmt::format("budget {} exceeds qubit count {}", budget, n_qubits));
  }
  std::vector<double> diag(dimension(n_qubits));
  for (std::size_t x = 0; x < diag.size(); ++x) {
    const double excess = static_cast<double>(std::popcount(x)) - static_cast<double>(budget);
    diag[x] = excess * excess;
  }
  return {n_qubits, std::move(diag)};
}

DiagonalObservable portfolio_cost_observable(std::span<const double> returns,
                                             const std::vector<std::vector<double>>& covariance,
                                             double risk_factor) {
  const std::size_t n = returns.size();
  if (covariance.size() != n) {
    throw InputError(fmt::format("covariance has {} rows, expected {}", covariance.size(), n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (covariance[i].size() != n) {
      throw InputError(fmt::format("covariance row {} has {} entries, expected {}", i,
                                   covariance[i].size(), n));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(covariance[i][j] - covariance[j][i]) > 1e-10) {
        throw InputError(fmt::format("covariance is not symmetric at ({}, {})", i, j));
      }
    }
  }
  std::vector<double> diag(dimension(n));
  for (std::size_t x = 0; x < diag.size(); ++x) {
    double risk = 0.0;
    double ret = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!bit(x, i)) continue;
      ret += returns[i];
      for (std::size_t j = 0; j < n; ++j) {
        if (bit(x, j)) risk += covariance[i][j];
      }
    }
    diag[x] = risk_factor * risk - ret;
  }
  return {n, std::move(diag)};
}

DiagonalObservable combine_observables(const DiagonalObservable& a,
                                       const DiagonalObservable& b, double lambda) {
  if (a.n_qubits != b.n_qubits || a.diag.size() != b.diag.size()) {
    throw InputError("combine_observables: qubit counts differ");
  }
  std::vector<double> diag(a.diag.size());
  for (std::size_t x = 0; x < diag.size(); ++x) diag[x] = a.diag[x] + lambda * b.diag[x];
  return {a.n_qubits, std::move(diag)};
}

DiagonalObservable PortfolioInstance::cost() const {
  return portfolio_cost_observable(returns, covariance, risk_factor);
}

DiagonalObservable PortfolioInstance::penalty() const {
  return budget_penalty_observable(n, budget);
}

DiagonalObservable PortfolioInstance::penalized(double lambda) const {
  return combine_observables(cost(), penalty(), lambda);
}

PortfolioInstance parse_portfolio(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("portfolio JSON: {}", e.what()));
  }
  PortfolioInstance p;
  try {
    p.n = j.at("n").get<std::size_t>();
    p.returns = j.at("returns").get<std::vector<double>>();
    p.covariance = j.at("covariance").get<std::vector<std::vector<double>>>();
    p.risk_factor = j.at("risk_factor").get<double>();
    p.budget = j.at("budget").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("portfolio JSON: {}", e.what()));
  }
  if (p.returns.size() != p.n) {
    throw InputError(fmt::format("portfolio: n = {} but {} returns", p.n, p.returns.size()));
  }
  // Validates dimensions, symmetry and budget eagerly.
  (void)p.cost();
  (void)p.penalty();
  return p;
}

PortfolioInstance load_portfolio(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open portfolio file {}", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_portfolio(buffer.str());
}

PortfolioInstance default_portfolio() {
  PortfolioInstance p;
  p.n = 4;
  p.returns = {0.35, 0.28, 0.22, 0.15};
  p.covariance = {{0.10, 0.02, 0.01, 0.00},
                  {0.02, 0.08, 0.015, 0.01},
                  {0.01, 0.015, 0.06, 0.005},
                  {0.00, 0.01, 0.005, 0.04}};
  p.risk_factor = 0.5;
  p.budget = 2;
  return p;
}

}  // namespace ttscape::qsim
