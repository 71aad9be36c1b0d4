/*
 * Copyright 2026 The esfts Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "esfts/dlmi.hpp"

#include <algorithm>

#include <cmath>
#include <future>
#include <sstream>

#include "esfts/averaging.hpp"
#include "esfts/linalg.hpp"

namespace esfts {

int DlmiLayout::var(int node, int a, int b) const {
  if (a > b) std::swap(a, b);
  // Offset of row a in the packed upper triangle.
  const int row_offset = a * n_ - a * (a - 1) / 2;
  return node * per_node() + row_offset + (b - a);
}

Matrix DlmiLayout::basis(int a, int b) const {
  Matrix e = Matrix::Zero(n_, n_);
  e(a, b) = 1.0;
  e(b, a) = 1.0;
  return e;
}

Vector DlmiLayout::pack(const std::vector<Matrix>& q, double margin) const {
  Vector y(num_vars());
  for (int k = 0; k <= intervals_; ++k) {
    for (int a = 0; a < n_; ++a) {
      for (int b = a; b < n_; ++b) {
        y(var(k, a, b)) = q[static_cast<std::size_t>(k)](a, b);
      }
    }
  }
  y(margin_var()) = margin;
  return y;
}

std::vector<Matrix> DlmiLayout::unpack(const Vector& y) const {
  std::vector<Matrix> q(static_cast<std::size_t>(intervals_) + 1,
                        Matrix::Zero(n_, n_));
  for (int k = 0; k <= intervals_; ++k) {
    for (int a = 0; a < n_; ++a) {
      for (int b = a; b < n_; ++b) {
        const double v = y(var(k, a, b));
        q[static_cast<std::size_t>(k)](a, b) = v;
        q[static_cast<std::size_t>(k)](b, a) = v;
      }
    }
  }
  return q;
}

namespace {

std::string tag(const char* kind, int k, const char* suffix = nullptr) {
  std::ostringstream os;
  os << kind << '(' << k;
  if (suffix != nullptr) os << ',' << suffix;
  os << ')';
  return os.str();
}

}  // namespace

SdpProblem assemble_lmi(const FtsProblem& p, const ShrunkSpec& spec, double ka,
                        const TimeGrid& grid) {
  if (!(ka >= 0.0)) throw Error(ErrorKind::kDomain, "ka must be >= 0");
  if (spec.times.size() != static_cast<std::size_t>(grid.intervals()) + 1) {
    throw Error(ErrorKind::kContract, "shrunk spec does not match the grid");
  }
  const int n = p.n;
  const int N = grid.intervals();
  const double h = grid.step();
  const DlmiLayout layout(n, N);
  const Matrix eye = Matrix::Identity(n, n);

  SdpProblem sdp;
  sdp.num_vars = layout.num_vars();
  sdp.margin_var = layout.margin_var();
  sdp.blocks.reserve(static_cast<std::size_t>(3 * N + 2));

  std::vector<Matrix> abar(static_cast<std::size_t>(N) + 1);
  for (int k = 0; k <= N; ++k) {
    abar[static_cast<std::size_t>(k)] = averaged_matrix(p, ka, grid.node(k));
  }

  // -Qdot_k + Abar(tau) Q(tau) + Q(tau) Abar(tau)^T + m I <= 0 at both ends
  // of interval k, with Qdot_k = (Q_{k+1} - Q_k) / h.
  for (int k = 0; k < N; ++k) {
    for (int end = 0; end < 2; ++end) {
      const int node = k + end;
      const Matrix& a = abar[static_cast<std::size_t>(node)];
      LmiBlock block;
      block.tag = tag("interval-DLMI", k, end == 0 ? "left" : "right");
      block.constant = Matrix::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          const Matrix e = layout.basis(i, j);
          const Matrix lyap = a * e + e * a.transpose();
          Matrix c_left = e / h;    // coefficient of Q_k entries
          Matrix c_right = -e / h;  // coefficient of Q_{k+1} entries
          (end == 0 ? c_left : c_right) += lyap;
          block.terms.push_back({layout.var(k, i, j), std::move(c_left)});
          block.terms.push_back({layout.var(k + 1, i, j), std::move(c_right)});
        }
      }
      block.terms.push_back({layout.margin_var(), eye});
      sdp.blocks.push_back(std::move(block));
    }
  }

  // Q_k + m I <= GammaBar(tau_k)^{-1}
  for (int k = 0; k <= N; ++k) {
    Matrix cap;
    try {
      cap = linalg::sym_inverse(spec.GammaBar.value(grid.node(k)));
    } catch (const Error& e) {
      std::ostringstream os;
      os << "GammaBar at node " << k << " cannot be inverted: " << e.what();
      throw Error(ErrorKind::kAssembly, os.str());
    }
    LmiBlock block;
    block.tag = tag("cap", k);
    block.constant = -cap;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        block.terms.push_back({layout.var(k, i, j), layout.basis(i, j)});
      }
    }
    block.terms.push_back({layout.margin_var(), eye});
    sdp.blocks.push_back(std::move(block));
  }

  // R^{-1} + m I <= Q_0
  {
    LmiBlock block;
    block.tag = "initial";
    try {
      block.constant = linalg::sym_inverse(p.R);
    } catch (const Error& e) {
      throw Error(ErrorKind::kAssembly,
                  std::string("R cannot be inverted: ") + e.what());
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        block.terms.push_back({layout.var(0, i, j), -layout.basis(i, j)});
      }
    }
    block.terms.push_back({layout.margin_var(), eye});
    sdp.blocks.push_back(std::move(block));
  }
  return sdp;
}

GainSchedule extract_gain(const FtsProblem& p, double ka, const TimeGrid& grid,
                          std::optional<std::pair<double, double>> split) {
  if (!(ka >= 0.0)) throw Error(ErrorKind::kDomain, "ka must be >= 0");
  GainSchedule out;
  if (split) {
    const auto [k, alpha] = *split;
    if (!(k > 0.0) || !(alpha > 0.0) ||
        std::abs(k * alpha - ka) > 1e-12 * std::max(1.0, ka)) {
      throw Error(ErrorKind::kDomain, "k * alpha must equal ka with k, alpha > 0");
    }
    out.k = k;
    out.alpha = alpha;
  } else {
    out.k = std::sqrt(ka);
    out.alpha = std::sqrt(ka);
  }
  std::vector<MatrixSchedule::Sample> samples;
  for (double t : grid.nodes()) {
    samples.push_back({t, -ka * p.b(t).transpose() * p.pi(t)});
  }
  out.K = MatrixSchedule::sampled(std::move(samples));
  return out;
}

SdpSolution solve_dlmi(const FtsProblem& p, const ShrunkSpec& spec, double ka,
                       const TimeGrid& grid, const SdpOptions& options) {
  const SdpProblem sdp = assemble_lmi(p, spec, ka, grid);
  // Start halfway between the initial-condition floor and the node caps.
  const DlmiLayout layout(p.n, grid.intervals());
  const Matrix r_inv = linalg::sym_inverse(p.R);
  std::vector<Matrix> q0;
  q0.reserve(static_cast<std::size_t>(grid.intervals()) + 1);
  for (int k = 0; k <= grid.intervals(); ++k) {
    q0.push_back(0.5 * (r_inv +
                        linalg::sym_inverse(spec.GammaBar.value(grid.node(k)))));
  }
  const Vector start = layout.pack(q0, 0.0);
  return solve_feasibility(sdp, options, &start);
}

SynthesisResult scan_gain(const FtsProblem& p, const ShrunkSpec& spec,
                          const TimeGrid& grid, const ScanOptions& options) {
  if (!(options.step > 0.0) || !(options.ka_max >= 0.0)) {
    throw Error(ErrorKind::kDomain, "scan step must be positive, ka_max >= 0");
  }
  const int last = static_cast<int>(std::floor(options.ka_max / options.step + 1e-9));
  const int jobs = std::max(1, options.jobs);

  // Infeasible scan points only need a proof, not the optimal margin.
  SdpOptions sdp = options.sdp;
  sdp.stop_when_infeasible = true;

  SynthesisResult result;
  result.spec = spec;
  result.grid = grid;

  for (int first = 0; first <= last; first += jobs) {
    const int count = std::min(jobs, last - first + 1);
    std::vector<SdpSolution> batch(static_cast<std::size_t>(count));
    if (count == 1) {
      batch[0] = solve_dlmi(p, spec, first * options.step, grid, sdp);
    } else {
      std::vector<std::future<SdpSolution>> futures;
      for (int i = 0; i < count; ++i) {
        const double ka = (first + i) * options.step;
        futures.push_back(std::async(std::launch::async, [&, ka] {
          return solve_dlmi(p, spec, ka, grid, sdp);
        }));
      }
      for (int i = 0; i < count; ++i) {
        batch[static_cast<std::size_t>(i)] = futures[static_cast<std::size_t>(i)].get();
      }
    }
    // Batches are consumed in ka order, so the first feasible is minimal.
    for (int i = 0; i < count; ++i) {
      const double ka = (first + i) * options.step;
      const SdpSolution& sol = batch[static_cast<std::size_t>(i)];
      result.scan.emplace_back(ka, sol.margin);
      if (!sol.feasible) continue;
      const DlmiLayout layout(p.n, grid.intervals());
      result.ka = ka;
      result.Q = layout.unpack(sol.y);
      result.margin = sol.margin;
      result.max_residual = sol.max_residual;
      result.gain = extract_gain(p, ka, grid);
      return result;
    }
  }
  std::ostringstream os;
  os << "no feasible ka <= " << options.ka_max << " with step " << options.step;
  if (!result.scan.empty()) {
    const auto best = std::max_element(
        result.scan.begin(), result.scan.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    os << " (best margin " << best->second << " at ka = " << best->first << ")";
  }
  throw Error(ErrorKind::kSynthesisFailed, os.str());
}

}  // namespace esfts
