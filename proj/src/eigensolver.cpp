#include "cqedvac/eigensolver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <cmath>
#include <random>
#include <string>

#include "cqedvac/error.hpp"

namespace cqedvac {

namespace {

using cvec = std::vector<std::complex<double>>;

std::complex<double> dot(const cvec& a, std::span<const std::complex<double>> b) {
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double norm(std::span<const std::complex<double>> v) {
  double acc = 0.0;
  for (const auto& x : v) acc += std::norm(x);
  return std::sqrt(acc);
}

// Two passes of classical Gram-Schmidt against basis[0..count); accumulates
// the projection coefficients into `coeff`.
void orthogonalize(const std::vector<cvec>& basis, std::size_t count, cvec& w,
                   std::vector<std::complex<double>>& coeff) {
  coeff.assign(count, 0.0);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t l = 0; l < count; ++l) {
      const auto h = dot(basis[l], w);
      coeff[l] += h;
      const auto& v = basis[l];
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= h * v[i];
    }
  }
}

double residual_norm(const LinearOperator& op, const cvec& v, double lambda, cvec& scratch) {
  op(v, scratch);
  for (std::size_t i = 0; i < v.size(); ++i) scratch[i] -= lambda * v[i];
  return norm(scratch);
}

}  // namespace

EigenPairs lanczos_lowest(const LinearOperator& op, std::size_t dimension,
                          std::span<const std::complex<double>> start, const LanczosOptions& opts) {
  if (opts.count < 1) throw DomainError("lanczos: count must be >= 1");
  if (!(opts.tolerance > 0.0)) throw DomainError("lanczos: tolerance must be > 0");
  if (start.size() != dimension) throw DomainError("lanczos: start vector has wrong dimension");
  const auto count = static_cast<std::size_t>(opts.count);
  if (count > dimension) throw DomainError("lanczos: more eigenpairs requested than dimension");

  std::size_t p = opts.basis_size > 0 ? static_cast<std::size_t>(opts.basis_size)
                                      : std::max<std::size_t>(2 * count + 20, 30);
  p = std::min(p, dimension);
  if (p < count + 1 && p < dimension) p = count + 1;
  const std::size_t keep = std::min(p - 1, std::max(count + 1, (p + count) / 2));

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  auto random_direction = [&](cvec& w) {
    for (auto& x : w) x = {uniform(rng), uniform(rng)};
  };

  std::vector<cvec> V;
  V.reserve(p);
  V.emplace_back(start.begin(), start.end());
  {
    const double n0 = norm(V[0]);
    if (!(n0 > 0.0)) throw DomainError("lanczos: start vector is zero");
    for (auto& x : V[0]) x /= n0;
  }

  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  cvec w(dimension);
  cvec scratch(dimension);
  std::vector<std::complex<double>> coeff;
  EigenPairs out;
  double scale = 0.0;
  std::vector<double> best(count, std::numeric_limits<double>::infinity());

  for (;;) {
    // Expand the basis to p vectors (or until the space is exhausted).
    double beta = 0.0;
    std::size_t j = V.size() - 1;
    for (;; ++j) {
      op(V[j], w);
      ++out.matvecs;
      orthogonalize(V, j + 1, w, coeff);
      for (std::size_t l = 0; l <= j; ++l) {
        T(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) = coeff[l];
        T(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = std::conj(coeff[l]);
      }
      T(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = coeff[j].real();
      scale = std::max(scale, std::abs(coeff[j].real()));
      beta = norm(w);
      if (j + 1 == p) break;
      if (beta <= 1e-13 * std::max(scale, 1.0)) {
        // Invariant subspace: continue with a fresh orthogonal direction.
        random_direction(w);
        orthogonalize(V, j + 1, w, coeff);
        const double nr = norm(w);
        if (!(nr > 1e-8)) {
          p = j + 1;
          beta = 0.0;
          break;
        }
        for (auto& x : w) x /= nr;
        beta = 0.0;
        V.push_back(w);
        continue;
      }
      for (auto& x : w) x /= beta;
      V.push_back(w);
    }

    const auto n = static_cast<Eigen::Index>(V.size());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(T.topLeftCorner(n, n));
    const Eigen::VectorXd theta = es.eigenvalues();
    const Eigen::MatrixXcd Y = es.eigenvectors();

    bool all_small = true;
    for (std::size_t i = 0; i < count; ++i) {
      const double est = beta * std::abs(Y(n - 1, static_cast<Eigen::Index>(i)));
      best[i] = std::min(best[i], est);
      if (est > 0.5 * opts.tolerance) all_small = false;
    }

    const std::size_t kept = std::min(V.size(), std::max(count, std::min(keep, V.size() - 1)));
    // Rotate the basis onto the kept Ritz vectors, row by row in place.
    {
      std::vector<std::complex<double>> row(V.size());
      for (std::size_t x = 0; x < dimension; ++x) {
        for (std::size_t l = 0; l < V.size(); ++l) row[l] = V[l][x];
        for (std::size_t i = 0; i < kept; ++i) {
          std::complex<double> acc = 0.0;
          for (std::size_t l = 0; l < V.size(); ++l) {
            acc += row[l] * Y(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(i));
          }
          V[i][x] = acc;
        }
      }
    }
    V.resize(kept);

    if (all_small) {
      out.values.assign(theta.data(), theta.data() + count);
      out.residuals.resize(count);
      bool verified = true;
      for (std::size_t i = 0; i < count; ++i) {
        out.residuals[i] = residual_norm(op, V[i], out.values[i], scratch);
        ++out.matvecs;
        best[i] = std::min(best[i], out.residuals[i]);
        if (out.residuals[i] > opts.tolerance) verified = false;
      }
      if (verified || beta == 0.0) {
        V.resize(count);
        out.vectors = std::move(V);
        return out;
      }
      // The residual estimate was optimistic; keep iterating.
      out.values.clear();
      out.residuals.clear();
    }

    T.setZero();
    for (std::size_t i = 0; i < kept; ++i) {
      T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = theta(static_cast<Eigen::Index>(i));
    }
    if (beta > 0.0) {
      for (auto& x : w) x /= beta;
    } else {
      random_direction(w);
      orthogonalize(V, V.size(), w, coeff);
      const double nr = norm(w);
      for (auto& x : w) x /= nr;
    }
    V.push_back(w);
    ++out.restarts;
    if (out.matvecs >= opts.max_matvecs) {
      throw ConvergenceError("lanczos: no convergence after " + std::to_string(out.matvecs) +
                                 " matrix-vector products",
                             best);
    }
  }
}

EigenPairs dense_lowest(const LinearOperator& op, std::size_t dimension, int count) {
  if (count < 1 || static_cast<std::size_t>(count) > dimension) {
    throw DomainError("dense_lowest: invalid eigenpair count");
  }
  const auto n = static_cast<Eigen::Index>(dimension);
  Eigen::MatrixXcd H(n, n);
  cvec unit(dimension, 0.0);
  cvec column(dimension);
  for (Eigen::Index c = 0; c < n; ++c) {
    unit[static_cast<std::size_t>(c)] = 1.0;
    op(unit, column);
    unit[static_cast<std::size_t>(c)] = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) H(r, c) = column[static_cast<std::size_t>(r)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense_lowest: eigensolver failed", {});

  EigenPairs out;
  out.matvecs = static_cast<int>(dimension);
  cvec scratch(dimension);
  for (int i = 0; i < count; ++i) {
    out.values.push_back(es.eigenvalues()(i));
    cvec v(dimension);
    for (Eigen::Index r = 0; r < n; ++r) v[static_cast<std::size_t>(r)] = es.eigenvectors()(r, i);
    out.residuals.push_back(residual_norm(op, v, out.values.back(), scratch));
    out.vectors.push_back(std::move(v));
  }
  return out;
}

}  // namespace cqedvac
