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

#include "esfts/sdp.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Sparse>

#include "esfts/linalg.hpp"

namespace esfts {

Matrix LmiBlock::evaluate(const Vector& y) const {
  Matrix g = constant;
  for (const auto& term : terms) g += y(term.var) * term.coeff;
  return g;
}

double max_block_residual(const SdpProblem& sdp, const Vector& y) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& block : sdp.blocks) {
    worst = std::max(worst, linalg::max_eigenvalue(block.evaluate(y)));
  }
  return worst;
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Squared Newton decrement below which a centering step is complete.
constexpr double kCenteringTol = 1e-8;
// Relative objective change that is indistinguishable from rounding.
constexpr double kRoundoff = 1e-13;

void check_structure(const SdpProblem& sdp) {
  if (sdp.num_vars < 1 || sdp.margin_var < 0 ||
      sdp.margin_var >= sdp.num_vars) {
    throw Error(ErrorKind::kContract, "malformed SDP: bad variable count");
  }
  if (sdp.blocks.empty()) {
    throw Error(ErrorKind::kContract, "malformed SDP: no blocks");
  }
  std::vector<char> used(static_cast<std::size_t>(sdp.num_vars), 0);
  for (const auto& block : sdp.blocks) {
    const auto d = block.dim();
    if (d < 1 || block.constant.cols() != d) {
      throw Error(ErrorKind::kContract,
                  "malformed SDP: block '" + block.tag + "' is not square");
    }
    bool has_margin = false;
    for (const auto& term : block.terms) {
      if (term.var < 0 || term.var >= sdp.num_vars ||
          term.coeff.rows() != d || term.coeff.cols() != d) {
        throw Error(ErrorKind::kContract,
                    "malformed SDP: bad term in block '" + block.tag + "'");
      }
      used[static_cast<std::size_t>(term.var)] = 1;
      if (term.var == sdp.margin_var) {
        has_margin = (term.coeff - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() == 0.0;
      }
    }
    if (!has_margin) {
      throw Error(ErrorKind::kContract, "malformed SDP: block '" + block.tag +
                                            "' lacks the +m*I margin term");
    }
  }
  for (int i = 0; i < sdp.num_vars; ++i) {
    if (!used[static_cast<std::size_t>(i)]) {
      std::ostringstream os;
      os << "malformed SDP: variable " << i << " appears in no block";
      throw Error(ErrorKind::kContract, os.str());
    }
  }
}

// Slack S_j = -G_j(y). Returns false if any slack is not PD; otherwise
// fills the inverses and the barrier sum -sum log det S_j.
bool factor_slacks(const SdpProblem& sdp, const Vector& y,
                   std::vector<Matrix>& inverses, double& barrier) {
  inverses.resize(sdp.blocks.size());
  barrier = 0.0;
  for (std::size_t j = 0; j < sdp.blocks.size(); ++j) {
    const Matrix s = -sdp.blocks[j].evaluate(y);
    Eigen::LLT<Matrix> llt(s);
    if (llt.info() != Eigen::Success) return false;
    const auto diag = llt.matrixLLT().diagonal();
    if (diag.minCoeff() <= 0.0) return false;
    barrier -= 2.0 * diag.array().log().sum();
    inverses[j] = llt.solve(Matrix::Identity(s.rows(), s.cols()));
  }
  return true;
}

}  // namespace

SdpSolution solve_feasibility(const SdpProblem& sdp, const SdpOptions& options,
                              const Vector* initial) {
  check_structure(sdp);
  const int nv = sdp.num_vars;
  const int mv = sdp.margin_var;

  double nu = 0.0;
  for (const auto& block : sdp.blocks) nu += static_cast<double>(block.dim());

  Vector y = Vector::Zero(nv);
  if (initial != nullptr) {
    if (initial->size() != nv) {
      throw Error(ErrorKind::kContract, "initial point has wrong size");
    }
    y = *initial;
  }
  // Strictly feasible start: push the margin below every block's top
  // eigenvalue.
  y(mv) = 0.0;
  const double top = max_block_residual(sdp, y);
  y(mv) = -top - 0.1 * (1.0 + std::abs(top));

  SparseMatrix hessian(nv, nv);
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  bool pattern_ready = false;
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<Matrix> inverses;
  std::vector<Matrix> weighted;  // W * A_a per local term
  Vector grad(nv);

  SdpSolution sol;
  double t = 1.0;
  int steps = 0;
  bool stalled = false;  // Newton system unusable; keep the last iterate
  double upper = std::numeric_limits<double>::infinity();

  double barrier = 0.0;
  if (!factor_slacks(sdp, y, inverses, barrier)) {
    throw Error(ErrorKind::kSolver, "could not construct a strictly feasible start");
  }
  std::vector<Matrix> trial_inverses;

  while (true) {
    // Centering: Newton with backtracking on f = -t m - sum log det S_j.
    for (;;) {
      if (++steps > options.max_newton) {
        std::ostringstream os;
        os << "interior-point method exceeded " << options.max_newton
           << " Newton steps (t = " << t << ", margin = " << y(mv) << ")";
        throw Error(ErrorKind::kSolver, os.str());
      }
      grad.setZero();
      grad(mv) = -t;
      triplets.clear();
      for (std::size_t j = 0; j < sdp.blocks.size(); ++j) {
        const auto& block = sdp.blocks[j];
        const Matrix& w = inverses[j];
        weighted.resize(block.terms.size());
        for (std::size_t a = 0; a < block.terms.size(); ++a) {
          weighted[a].noalias() = w * block.terms[a].coeff;
          grad(block.terms[a].var) += weighted[a].trace();
        }
        for (std::size_t a = 0; a < block.terms.size(); ++a) {
          for (std::size_t b = 0; b <= a; ++b) {
            const double h =
                weighted[a].cwiseProduct(weighted[b].transpose()).sum();
            const int ia = block.terms[a].var;
            const int ib = block.terms[b].var;
            // Lower triangle only; SimplicialLDLT reads the lower part.
            if (ia >= ib) {
              triplets.emplace_back(ia, ib, h);
            } else {
              triplets.emplace_back(ib, ia, h);
            }
            if (a != b && ia == ib) triplets.emplace_back(ia, ib, h);
          }
        }
      }
      hessian.setFromTriplets(triplets.begin(), triplets.end());
      if (!pattern_ready) {
        ldlt.analyzePattern(hessian);
        pattern_ready = true;
      }
      // Far along the central path the Hessian loses definiteness to
      // rounding; a tiny diagonal shift restores it.
      Vector dy;
      double lambda2 = -1.0;
      for (int attempt = 0; attempt < 4 && !(lambda2 >= 0.0); ++attempt) {
        if (attempt > 0) {
          const double shift =
              hessian.diagonal().cwiseAbs().maxCoeff() * std::pow(1e3, attempt) * 1e-16;
          for (int i = 0; i < nv; ++i) hessian.coeffRef(i, i) += shift;
        }
        ldlt.factorize(hessian);
        if (ldlt.info() != Eigen::Success) continue;
        dy = ldlt.solve(-grad);
        const double l2 = -grad.dot(dy);
        if (std::isfinite(l2) && l2 >= -1e-8 * (1.0 + grad.squaredNorm())) {
          lambda2 = std::max(l2, 0.0);
        }
      }
      if (!(lambda2 >= 0.0)) {
        stalled = true;
        break;
      }
      if (lambda2 <= kCenteringTol) break;

      const double f0 = -t * y(mv) + barrier;
      double step = 1.0;
      double trial_barrier = 0.0;
      Vector trial;
      bool moved = false;
      for (int tries = 0; tries < 60; ++tries, step *= 0.5) {
        trial = y + step * dy;
        if (!factor_slacks(sdp, trial, trial_inverses, trial_barrier)) continue;
        const double f1 = -t * trial(mv) + trial_barrier;
        const double decrease = 0.25 * step * lambda2;
        if (decrease < kRoundoff * (1.0 + std::abs(f0))) break;
        if (f1 <= f0 - decrease) {
          moved = true;
          break;
        }
      }
      // No sufficient decrease within rounding: the point is as centred as
      // double precision allows.
      if (!moved) break;
      y = std::move(trial);
      inverses.swap(trial_inverses);
      barrier = trial_barrier;
      if (y(mv) > 1e12) {
        throw Error(ErrorKind::kSolver, "margin is unbounded");
      }
    }
    if (stalled) break;
    upper = y(mv) + nu / t;
    if (nu / t < options.gap_tol) break;
    if (options.stop_when_infeasible && upper <= options.strict_tol) break;
    t *= options.t_growth;
  }

  sol.y = y;
  sol.margin = y(mv);
  sol.margin_upper = upper;
  sol.newton_steps = steps;
  sol.max_residual = max_block_residual(sdp, y);
  sol.feasible = sol.margin > options.strict_tol &&
                 sol.max_residual <= options.strict_tol;
  if (stalled && !sol.feasible && upper > options.strict_tol) {
    std::ostringstream os;
    os << "Newton system became singular before feasibility was decided (t = "
       << t << ", margin in [" << sol.margin << ", " << upper << "])";
    throw Error(ErrorKind::kSolver, os.str());
  }
  return sol;
}

void write_sdp_text(std::ostream& os, const SdpProblem& sdp) {
  const auto old_precision = os.precision();
  os << std::setprecision(17);
  os << "esfts-sdp 1\n";
  os << "vars " << sdp.num_vars << " margin " << sdp.margin_var << " blocks "
     << sdp.blocks.size() << "\n";
  auto write_matrix = [&](const Matrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) os << ' ' << m(r, c);
    }
    os << '\n';
  };
  for (std::size_t j = 0; j < sdp.blocks.size(); ++j) {
    const auto& block = sdp.blocks[j];
    os << "block " << j << ' ' << block.tag << " dim " << block.dim()
       << " terms " << block.terms.size() << '\n';
    os << "const";
    write_matrix(block.constant);
    for (const auto& term : block.terms) {
      os << "var " << term.var;
      write_matrix(term.coeff);
    }
  }
  os.precision(old_precision);
}

}  // namespace esfts
