#pragma once

#include "errors.hpp"
#include "spectrum.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace instant {

/// Cell-centred grid on [-L, L]: x_i = -L + (i + 1/2) h, h = 2L / G. Values
/// outside the domain are taken as zero.
struct Grid {
  std::size_t cells = 0;
  double half_width = 0.0;

  Grid() = default;
  Grid(std::size_t G, double L) : cells(G), half_width(L) {
    if (G < 8) throw PreconditionError("grid needs at least 8 cells, got " + std::to_string(G));
    if (!(L > 0.0)) throw PreconditionError("grid half-width must be positive");
  }

  double spacing() const noexcept { return 2.0 * half_width / static_cast<double>(cells); }
  double x(std::size_t i) const noexcept {
    return -half_width + (static_cast<double>(i) + 0.5) * spacing();
  }
  Grid refined() const { return Grid(2 * cells, half_width); }
};

struct GridFunctionSet {
  Grid grid;
  std::vector<Eigen::VectorXcd> functions;

  GridFunctionSet() = default;
  GridFunctionSet(Grid g, std::vector<Eigen::VectorXcd> fs) : grid(g), functions(std::move(fs)) {
    for (auto& f : functions) {
      if (static_cast<std::size_t>(f.size()) != grid.cells)
        throw PreconditionError("grid function length does not match the grid");
      const double norm = std::sqrt(f.squaredNorm() * grid.spacing());
      if (!(norm > 0.0)) throw PreconditionError("grid function is identically zero");
      f /= norm;
    }
  }

  double norm_squared(std::size_t k) const { return functions.at(k).squaredNorm() * grid.spacing(); }
};

/// -Laplacian by the three-point stencil with zero ghost cells.
inline Eigen::VectorXcd negative_laplacian(const Eigen::VectorXcd& f, double h) {
  const Eigen::Index n = f.size();
  Eigen::VectorXcd out(n);
  const double inv = 1.0 / (h * h);
  for (Eigen::Index i = 0; i < n; ++i) {
    const complex left = i > 0 ? f[i - 1] : complex{};
    const complex right = i + 1 < n ? f[i + 1] : complex{};
    out[i] = (2.0 * f[i] - left - right) * inv;
  }
  return out;
}

/// <f, -Laplacian f> on the grid.
inline double kinetic_form(const Eigen::VectorXcd& f, double h) {
  return (f.dot(negative_laplacian(f, h))).real() * h;
}

/// <f, V f> for a potential sampled on the grid.
inline double potential_form(const Eigen::VectorXcd& f, const Eigen::VectorXd& v, double h) {
  return (f.cwiseAbs2().cwiseProduct(v)).sum() * h;
}

struct ObstructionResult {
  bool certificate = false;
  std::size_t nullity = 0;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd kinetic;
  double K = 0.0;
  double tolerance = 0.0;
  double constraint_residual = 0.0;
  std::string reason;
};

/// Looks for weights a with sum a_k = 0 and sum a_k |h_k(x_i)|^2 = 0 at every
/// grid point. Any potential term then cancels in sum a_k <h_k, H h_k>; if the
/// kinetic part K = sum a_k <h_k, -Laplacian h_k> does not vanish, no single
/// Schroedinger orbit contains all h_k. A negative `tolerance` selects the
/// default 1e3 * eps * sum |a_k T_k|.
inline ObstructionResult obstruction_certificate(const GridFunctionSet& set, double tolerance = -1.0) {
  const std::size_t n = set.functions.size();
  if (n < 2) throw PreconditionError("obstruction_certificate: need at least two functions");
  if (set.grid.cells < 8) throw PreconditionError("obstruction_certificate: degenerate grid");
  const double h = set.grid.spacing();
  const auto G = static_cast<Eigen::Index>(set.grid.cells);

  Eigen::MatrixXd A(G + 1, static_cast<Eigen::Index>(n));
  Eigen::VectorXd T(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const auto c = static_cast<Eigen::Index>(k);
    A(0, c) = 1.0;
    A.block(1, c, G, 1) = set.functions[k].cwiseAbs2() * h;
    T[c] = kinetic_form(set.functions[k], h);
  }

  ObstructionResult res;
  res.kinetic = T;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = 1e-9 * (sv.size() ? sv[0] : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff) ++rank;
  const Eigen::Index nullity = static_cast<Eigen::Index>(n) - rank;
  res.nullity = static_cast<std::size_t>(nullity);
  if (nullity == 0) {
    res.coefficients = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    res.reason = "constraint system admits only a = 0";
    return res;
  }

  // weights in the null space with the largest kinetic mismatch
  const Eigen::MatrixXd N = svd.matrixV().rightCols(nullity);
  const Eigen::VectorXd proj = N.transpose() * T;
  const double pn = proj.norm();
  res.coefficients = pn > 0.0 ? Eigen::VectorXd(N * proj / pn) : Eigen::VectorXd(N.col(0));
  res.K = res.coefficients.dot(T);
  res.constraint_residual = (A * res.coefficients).cwiseAbs().maxCoeff();
  res.tolerance = tolerance >= 0.0
                      ? tolerance
                      : 1e3 * std::numeric_limits<double>::epsilon() *
                            res.coefficients.cwiseAbs().dot(T.cwiseAbs());
  res.certificate = std::abs(res.K) > res.tolerance;
  res.reason = res.certificate ? "kinetic mismatch exceeds tolerance"
                               : "kinetic mismatch within tolerance";
  return res;
}

inline Eigen::VectorXcd gaussian(const Grid& g, double sigma, double chirp = 0.0) {
  Eigen::VectorXcd f(static_cast<Eigen::Index>(g.cells));
  for (std::size_t i = 0; i < g.cells; ++i) {
    const double x = g.x(i);
    f[static_cast<Eigen::Index>(i)] = std::polar(std::exp(-x * x / (2.0 * sigma * sigma)), chirp * x * x);
  }
  return f;
}

/// h1 a Gaussian of width sigma, h2 = h1 exp(i x^2).
inline GridFunctionSet chirped_pair(const Grid& g, double sigma = 1.0) {
  return {g, {gaussian(g, sigma), gaussian(g, sigma, 1.0)}};
}

inline GridFunctionSet identical_pair(const Grid& g, double sigma = 1.0) {
  return {g, {gaussian(g, sigma), gaussian(g, sigma)}};
}

inline GridFunctionSet width_pair(const Grid& g, double sigma1 = 1.0, double sigma2 = 2.0) {
  return {g, {gaussian(g, sigma1), gaussian(g, sigma2)}};
}

/// Columns x, re0, im0, re1, im1, ...; the grid must be cell-centred and uniform.
inline GridFunctionSet read_grid_csv(std::istream& in, const std::string& what = "input") {
  std::string line;
  std::vector<double> xs;
  std::vector<std::vector<double>> cols;
  std::size_t lineno = 0, width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.find_first_of("0123456789") != 0 && line[0] != '-' && line[0] != '.' &&
        line[0] != '+')
      continue; // header
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument("");
      } catch (const std::logic_error&) {
        throw PreconditionError(what + ": line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (width == 0) {
      width = row.size();
      if (width < 5 || (width - 1) % 2 != 0)
        throw PreconditionError(what + ": line " + std::to_string(lineno) +
                                ": expected x followed by re/im pairs for at least two functions");
      cols.resize(width - 1);
    } else if (row.size() != width) {
      throw PreconditionError(what + ": line " + std::to_string(lineno) + ": expected " +
                              std::to_string(width) + " columns");
    }
    xs.push_back(row[0]);
    for (std::size_t c = 1; c < width; ++c) cols[c - 1].push_back(row[c]);
  }
  if (xs.size() < 8) throw PreconditionError(what + ": degenerate grid (fewer than 8 points)");

  const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (std::abs(xs[i] - xs[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw PreconditionError(what + ": grid is not uniform near row " + std::to_string(i + 1));
  const double L = -(xs.front() - h / 2.0);
  if (std::abs((xs.back() + h / 2.0) - L) > 1e-9 * std::max(1.0, L))
    throw PreconditionError(what + ": grid is not symmetric about 0");
  Grid grid(xs.size(), L);

  std::vector<Eigen::VectorXcd> fs;
  for (std::size_t k = 0; k + 1 < cols.size(); k += 2) {
    Eigen::VectorXcd f(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) f[static_cast<Eigen::Index>(i)] = {cols[k][i], cols[k + 1][i]};
    fs.push_back(std::move(f));
  }
  return {grid, std::move(fs)};
}

inline GridFunctionSet load_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open grid file '" + path + "'");
  return read_grid_csv(in, path);
}

inline void write_grid_csv(std::ostream& out, const GridFunctionSet& set) {
  out << "x";
  for (std::size_t k = 0; k < set.functions.size(); ++k) out << ",re" << k << ",im" << k;
  out << "\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (std::size_t i = 0; i < set.grid.cells; ++i) {
    put(set.grid.x(i));
    for (const auto& f : set.functions) {
      out << ",";
      put(f[static_cast<Eigen::Index>(i)].real());
      out << ",";
      put(f[static_cast<Eigen::Index>(i)].imag());
    }
    out << "\n";
  }
}

} // namespace instant
