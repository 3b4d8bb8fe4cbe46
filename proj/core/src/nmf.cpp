#include "scipi/nmf.hpp"

#include <cmath>
#include <limits>

#include "scipi/error.hpp"
#include "scipi/random.hpp"

namespace scipi {

namespace {

constexpr double kModelFloor = 1e-300;

struct InnerUpdate {
  NmfMethod method;
  double sigma;
  double pgd_step;
  long long* floor_hits;
};

// z = v ./ max(Wh, floor), counting floored entries where v > 0.
Vector ratio(const Vector& v, const Vector& model, long long* floor_hits) {
  Vector z(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double m = model[i];
    if (m < kModelFloor) {
      if (v[i] > 0.0 && floor_hits) ++*floor_hits;
      m = kModelFloor;
    }
    z[i] = v[i] / m;
  }
  return z;
}

// One update of h for  min_h KL(v || W h), h >= 0. `c` holds the column sums of W.
Vector update_column(const Matrix& W, const Vector& c, const Vector& v, const Vector& h,
                     const InnerUpdate& rule) {
  const double S = v.sum();
  if (!(S > 0.0)) return Vector::Zero(h.size());

  if (rule.method == NmfMethod::MU) {
    const Vector z = ratio(v, W * h, rule.floor_hits);
    return h.cwiseProduct((W.transpose() * z).cwiseQuotient(c));
  }

  // Simplex coordinates hbar = c .* h / S, renormalized to sum one.
  Vector hbar = c.cwiseProduct(h) / S;
  const double mass = hbar.sum();
  if (!(mass > 0.0)) throw NumericError("nmf: a column of H collapsed to zero");
  hbar /= mass;
  const Vector z = ratio(v, W * (S * hbar.cwiseQuotient(c)), rule.floor_hits);
  const Vector g = (W.transpose() * z).cwiseQuotient(c);

  if (rule.method == NmfMethod::SCIPI) {
    hbar = hbar.cwiseProduct((g.array() + rule.sigma).square().matrix());
    hbar /= hbar.sum();
  } else {
    const Vector ascent = hbar + rule.pgd_step * hbar.cwiseProduct(g - Vector::Ones(g.size()));
    hbar = project_simplex(ascent, 1.0);
  }
  return S * hbar.cwiseQuotient(c);
}

Vector column_sums_checked(const Matrix& W) {
  const Vector c = W.colwise().sum().transpose();
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    if (!(c[k] > 0.0)) {
      throw NumericError("nmf: factor column " + std::to_string(k) + " sums to zero");
    }
  }
  return c;
}

void outer_iteration(const Matrix& V, Matrix& W, Matrix& H, const InnerUpdate& rule) {
  const Vector cw = column_sums_checked(W);
  for (Eigen::Index j = 0; j < V.cols(); ++j) {
    H.col(j) = update_column(W, cw, V.col(j), H.col(j), rule);
  }
  const Matrix Ht = H.transpose();
  const Vector ch = column_sums_checked(Ht);
  for (Eigen::Index i = 0; i < V.rows(); ++i) {
    W.row(i) = update_column(Ht, ch, V.row(i).transpose(), W.row(i).transpose(), rule).transpose();
  }
}

void check_inputs(const Matrix& V, int rank, const char* who) {
  if (rank < 1) throw InputError(std::string(who) + ": rank must be at least 1");
  if (V.rows() < 1 || V.cols() < 1) throw InputError(std::string(who) + ": empty data matrix");
  if (!V.allFinite() || (V.array() < 0.0).any()) {
    throw InputError(std::string(who) + ": data must be finite and nonnegative");
  }
}

double subproblem_residual(const Matrix& W, const Vector& v, const Vector& h) {
  const double S = v.sum();
  if (!(S > 0.0)) return 0.0;
  const Vector c = column_sums_checked(W);
  const Vector z = ratio(v, W * h, nullptr);
  const Vector g = (W.transpose() * z).cwiseQuotient(c);
  const Vector hbar = c.cwiseProduct(h) / S;
  return 2.0 * std::sqrt(hbar.dot((g.array() - 1.0).square().matrix()));
}

}  // namespace

std::string to_string(NmfMethod method) {
  switch (method) {
    case NmfMethod::MU:
      return "mu";
    case NmfMethod::PGD:
      return "pgd";
    case NmfMethod::SCIPI:
      return "sci-pi";
  }
  return "unknown";
}

NmfMethod parse_nmf_method(const std::string& name) {
  if (name == "mu") return NmfMethod::MU;
  if (name == "pgd") return NmfMethod::PGD;
  if (name == "sci-pi" || name == "scipi") return NmfMethod::SCIPI;
  throw InputError("unknown NMF method '" + name + "' (expected mu, pgd or sci-pi)");
}

double kl_divergence(const Matrix& V, const Matrix& W, const Matrix& H) {
  if (W.rows() != V.rows() || H.cols() != V.cols() || W.cols() != H.rows()) {
    throw InputError("kl_divergence: factor shapes do not match V");
  }
  const Matrix model = W * H;
  double total = 0.0;
  for (Eigen::Index j = 0; j < V.cols(); ++j) {
    for (Eigen::Index i = 0; i < V.rows(); ++i) {
      const double v = V(i, j);
      const double m = model(i, j);
      if (v > 0.0) {
        if (!(m > 0.0)) throw NumericError("kl_divergence: model is zero where data is positive");
        total += v * std::log(v / m) - v + m;
      } else {
        total += m;
      }
    }
  }
  return total;
}

double nmf_stationarity(const Matrix& V, const Matrix& W, const Matrix& H) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < V.cols(); ++j) {
    worst = std::max(worst, subproblem_residual(W, V.col(j), H.col(j)));
  }
  const Matrix Ht = H.transpose();
  for (Eigen::Index i = 0; i < V.rows(); ++i) {
    worst = std::max(worst, subproblem_residual(Ht, V.row(i).transpose(), W.row(i).transpose()));
  }
  return worst;
}

NmfInit nmf_initialize(const Matrix& V, int rank, std::uint64_t seed) {
  check_inputs(V, rank, "nmf_initialize");
  Rng rng = Rng::derive(seed, "nmf-init");
  NmfInit init;
  init.W = rng.uniform_matrix(V.rows(), rank);
  init.H = rng.uniform_matrix(rank, V.cols());
  const InnerUpdate mu{NmfMethod::MU, 0.0, 0.0, nullptr};
  outer_iteration(V, init.W, init.H, mu);
  return init;
}

NMFModel nmf_solve(const Matrix& V, int rank, NmfMethod method, const NmfInit& init,
                   const NmfOptions& options) {
  check_inputs(V, rank, "nmf_solve");
  if (init.W.rows() != V.rows() || init.W.cols() != rank || init.H.rows() != rank ||
      init.H.cols() != V.cols()) {
    throw InputError("nmf_solve: initial factors do not match V and the rank");
  }
  if ((init.W.array() < 0.0).any() || (init.H.array() < 0.0).any()) {
    throw InputError("nmf_solve: initial factors must be nonnegative");
  }
  if (options.max_iter < 0) throw ConfigError("nmf_solve: max_iter must be nonnegative");

  NMFModel model;
  model.V = V;
  model.rank = rank;
  model.method = method;
  InnerUpdate rule{method, options.sigma, 0.0, &model.floor_hits};

  if (method == NmfMethod::PGD) {
    if (options.pgd_grid.empty()) throw ConfigError("nmf_solve: PGD step grid is empty");
    double best = std::numeric_limits<double>::infinity();
    for (double s : options.pgd_grid) {
      if (!(s > 0.0)) throw ConfigError("nmf_solve: PGD step factors must be positive");
      Matrix W = init.W;
      Matrix H = init.H;
      outer_iteration(V, W, H, InnerUpdate{method, 0.0, s, nullptr});
      const double kl = kl_divergence(V, W, H);
      if (kl < best) {
        best = kl;
        rule.pgd_step = s;
      }
    }
    model.pgd_step = rule.pgd_step;
  }

  model.W = init.W;
  model.H = init.H;
  model.kl_trace.push_back(kl_divergence(V, model.W, model.H));
  for (int it = 0; it < options.max_iter; ++it) {
    outer_iteration(V, model.W, model.H, rule);
    model.kl_trace.push_back(kl_divergence(V, model.W, model.H));
    ++model.iterations;
  }
  return model;
}

}  // namespace scipi
