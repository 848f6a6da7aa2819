#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "circlelab/sphere.hpp"

namespace testsupport {

using circlelab::Complex;
using circlelab::conformal_factor;

// Dense barrier method for min rho^T W rho subject to A rho >= 1.
inline double barrier_qp(const Eigen::MatrixXd& a, const Eigen::VectorXd& w) {
  const Eigen::Index n = a.cols();
  Eigen::VectorXd rho = Eigen::VectorXd::Ones(n);
  rho *= 2.0 / (a * rho).minCoeff();
  for (double t = 1.0; t <= 1e13; t *= 4.0) {
    for (int it = 0; it < 100; ++it) {
      const Eigen::VectorXd s = (a * rho).array() - 1.0;
      const Eigen::VectorXd inv = s.cwiseInverse();
      const Eigen::VectorXd grad = 2.0 * t * w.cwiseProduct(rho) - a.transpose() * inv;
      Eigen::MatrixXd hess = a.transpose() * inv.cwiseAbs2().asDiagonal() * a;
      hess.diagonal() += 2.0 * t * w;
      const Eigen::VectorXd step = -hess.ldlt().solve(grad);
      const double decrement = -grad.dot(step);
      if (decrement < 1e-14) break;
      auto phi = [&](const Eigen::VectorXd& x) {
        const Eigen::VectorXd sx = (a * x).array() - 1.0;
        if (sx.minCoeff() <= 0.0) return std::numeric_limits<double>::infinity();
        return t * x.dot(w.cwiseProduct(x)) - sx.array().log().sum();
      };
      double alpha = 1.0;
      const double f0 = phi(rho);
      while (phi(rho + alpha * step) > f0 - 0.25 * alpha * decrement) alpha *= 0.5;
      rho += alpha * step;
    }
  }
  return rho.dot(w.cwiseProduct(rho));
}

// Exhaustive oracle for the 4 x 4 instance: window [-0.25, 1.25] x [0, 1],
// h = 0.25, axis moves, optional continuum [0.3, 0.45] x [0.3, 0.7].
struct GridOracle {
  double value = 0.0;
  std::size_t paths = 0;
};

inline GridOracle grid_oracle(bool transboundary) {
  constexpr double h = 0.25, cx0 = 0.3, cx1 = 0.45, cy0 = 0.3, cy1 = 0.7;
  auto center = [&](int i, int j) { return Complex(-0.25 + (i + 0.5) * h, (j + 0.5) * h); };
  auto in_k = [&](int i, int j) {
    const Complex z = center(i, j);
    return transboundary && z.real() > cx0 && z.real() < cx1 && z.imag() > cy0 && z.imag() < cy1;
  };
  // Variables: free cells of columns 1..4, then the continuum.
  std::vector<int> var(24, -1);
  int nv = 0;
  for (int j = 0; j < 4; ++j)
    for (int i = 1; i <= 4; ++i)
      if (!in_k(i, j)) var[j * 6 + i] = nv++;
  const int kvar = transboundary ? nv++ : -1;
  Eigen::VectorXd w(nv);
  for (int j = 0; j < 4; ++j)
    for (int i = 1; i <= 4; ++i)
      if (var[j * 6 + i] >= 0) w[var[j * 6 + i]] = std::pow(conformal_factor(center(i, j)) * h, 2);
  if (kvar >= 0) w[kvar] = 1.0;
  auto lam = [&](int i, int j) { return conformal_factor(center(i, j)); };
  // Distance from a free cell center to the continuum along an axis step.
  auto to_k = [&](int i, int j, int di, int dj) {
    const Complex z = center(i, j);
    if (di == 1) return cx0 - z.real();
    if (di == -1) return z.real() - cx1;
    if (dj == 1) return cy0 - z.imag();
    return z.imag() - cy1;
  };
  // Node 0..23: cells; 24: continuum; 25: E; 26: F.
  std::vector<std::vector<double>> rows;
  std::vector<double> coef(static_cast<std::size_t>(nv), 0.0);
  std::vector<char> used(27, 0);
  std::function<void(int, int)> dfs = [&](int i, int j) {
    // At free cell (i, j) or, with i < 0, on the continuum.
    std::vector<std::pair<int, int>> next;
    if (i < 0) {
      for (int jj = 0; jj < 4; ++jj)
        for (int ii = 1; ii <= 4; ++ii)
          if (in_k(ii, jj))
            for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
              const int ti = ii + di, tj = jj + dj;
              if (ti >= 1 && ti <= 4 && tj >= 0 && tj < 4 && !in_k(ti, tj)) next.emplace_back(ti, tj);
            }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      for (auto [ti, tj] : next) {
        if (used[tj * 6 + ti]) continue;
        // Entry direction from the continuum into (ti, tj).
        double d = 0.0;
        for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
          if (ti - di >= 1 && ti - di <= 4 && tj - dj >= 0 && tj - dj < 4 && in_k(ti - di, tj - dj))
            d = to_k(ti, tj, -di, -dj);
        const double c = d * lam(ti, tj);
        coef[var[tj * 6 + ti]] += c;
        used[tj * 6 + ti] = 1;
        dfs(ti, tj);
        used[tj * 6 + ti] = 0;
        coef[var[tj * 6 + ti]] -= c;
      }
      return;
    }
    const int v = var[j * 6 + i];
    if (i == 4) {
      coef[v] += 0.5 * h * lam(i, j);
      rows.push_back(coef);
      coef[v] -= 0.5 * h * lam(i, j);
    }
    for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      const int ti = i + di, tj = j + dj;
      if (ti < 1 || ti > 4 || tj < 0 || tj >= 4) continue;
      if (in_k(ti, tj)) {
        if (used[24]) continue;
        const double c = to_k(i, j, di, dj) * lam(i, j);
        coef[v] += c;
        coef[kvar] += 1.0;
        used[24] = 1;
        dfs(-1, -1);
        used[24] = 0;
        coef[kvar] -= 1.0;
        coef[v] -= c;
        continue;
      }
      if (used[tj * 6 + ti]) continue;
      const double c = 0.5 * h * lam(i, j), ct = 0.5 * h * lam(ti, tj);
      coef[v] += c;
      coef[var[tj * 6 + ti]] += ct;
      used[tj * 6 + ti] = 1;
      dfs(ti, tj);
      used[tj * 6 + ti] = 0;
      coef[var[tj * 6 + ti]] -= ct;
      coef[v] -= c;
    }
  };
  for (int j = 0; j < 4; ++j) {
    const int v = var[j * 6 + 1];
    coef[v] += 0.5 * h * lam(1, j);
    used[j * 6 + 1] = 1;
    dfs(1, j);
    used[j * 6 + 1] = 0;
    coef[v] -= 0.5 * h * lam(1, j);
  }
  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), nv);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int k = 0; k < nv; ++k) a(static_cast<Eigen::Index>(r), k) = rows[r][static_cast<std::size_t>(k)];
  return {barrier_qp(a, w), rows.size()};
}

}  // namespace testsupport
