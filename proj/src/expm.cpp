#include "qwalk/expm.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

void validate_options(const ExpmOptions& o) {
  if (!(o.tol > 0.0 && o.tol <= 1e-4)) throw ValidationError("expm tolerance must lie in (0, 1e-4]");
  if (o.krylov_max_dim < 2) throw ValidationError("krylov_max_dim must be at least 2");
  if (!(o.max_norm_step > 0.0)) throw ValidationError("max_norm_step must be positive");
}

template <typename Scalar>
double max_abs_coeff(const Eigen::SparseMatrix<Scalar>& m) {
  double out = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(m, k); it; ++it) out = std::max(out, std::abs(it.value()));
  return out;
}

template <typename Scalar>
bool all_finite(const Eigen::SparseMatrix<Scalar>& m) {
  for (int k = 0; k < m.outerSize(); ++k)
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(m, k); it; ++it)
      if (!std::isfinite(std::real(it.value())) || !std::isfinite(std::imag(it.value()))) return false;
  return true;
}

template <typename Scalar>
double power_iteration_norm(const Eigen::SparseMatrix<Scalar>& h, int iterations) {
  const Eigen::Index n = h.rows();
  if (n == 0) return 0.0;
  Vec<Scalar> x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = Scalar(1.0 + 0.5 * std::sin(static_cast<double>(i) + 1.0));
  x.normalize();
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vec<Scalar> y = h * x;
    estimate = y.norm();
    if (estimate == 0.0) return 0.0;
    x = y / estimate;
  }
  return estimate;
}

// One Lanczos approximation of f(A dt) w with an adaptive subspace size.
// Returns false when the subspace cap is reached before the a-posteriori
// error estimate beta0 * beta_m * |e_m^T f(T_m dt) e_1| drops below abs_tol.
template <typename Scalar, typename Fn>
bool lanczos_exp(const Eigen::SparseMatrix<Scalar>& a, const Vec<Scalar>& w, double dt, Fn f, double abs_tol,
                 int max_dim, double norm_est, Vec<Scalar>& out) {
  const double beta0 = w.norm();
  if (beta0 == 0.0) {
    out = w;
    return true;
  }
  const Eigen::Index n = a.rows();
  const int cap = static_cast<int>(std::min<Eigen::Index>(max_dim, n));
  std::vector<Vec<Scalar>> basis;
  basis.reserve(static_cast<std::size_t>(cap) + 1);
  basis.push_back(w / beta0);
  std::vector<double> alpha;
  std::vector<double> beta;

  for (int j = 0; j < cap; ++j) {
    Vec<Scalar> u = a * basis[static_cast<std::size_t>(j)];
    alpha.push_back(std::real(basis[static_cast<std::size_t>(j)].dot(u)));
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) u -= q * q.dot(u);
    const double bj = u.norm();
    const int m = j + 1;

    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1))
                                : Eigen::VectorXd();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& q = es.eigenvectors();
    Vec<Scalar> c(m);
    for (int i = 0; i < m; ++i) c[i] = f(es.eigenvalues()[i], dt) * q(0, i);
    Vec<Scalar> y = q.template cast<Scalar>() * c;

    const bool breakdown = bj <= 1e-14 * std::max(norm_est, std::abs(alpha.back()));
    const double err = beta0 * bj * std::abs(y[m - 1]);
    if (breakdown || err <= abs_tol || m == n) {
      out = Vec<Scalar>::Zero(n);
      for (int i = 0; i < m; ++i) out += (beta0 * y[i]) * basis[static_cast<std::size_t>(i)];
      return true;
    }
    if (m == cap) return false;
    beta.push_back(bj);
    basis.push_back(u / bj);
  }
  return false;
}

template <typename Scalar, typename Fn>
Vec<Scalar> krylov_apply(const Eigen::SparseMatrix<Scalar>& a, Vec<Scalar> v, double t, Fn f, double norm_est,
                         const ExpmOptions& o, bool split_by_norm, const Eigen::SparseMatrix<Scalar>* stop_when_null = nullptr) {
  const double total = std::abs(t);
  if (total == 0.0) return v;
  const double sign = t < 0.0 ? -1.0 : 1.0;
  double dt = total;
  if (split_by_norm && norm_est > 0.0) {
    const double pieces = std::max(1.0, std::ceil(norm_est * total / o.max_norm_step));
    dt = total / pieces;
  }
  const double abs_tol = o.tol * v.norm();
  double done = 0.0;
  while (total - done > 1e-14 * total) {
    const double step = std::min(dt, total - done);
    Vec<Scalar> out;
    if (lanczos_exp(a, v, sign * step, f, abs_tol, o.krylov_max_dim, norm_est, out)) {
      v = std::move(out);
      done += step;
      if (stop_when_null && ((*stop_when_null) * v).norm() <= o.tol * norm_est * v.norm()) break;
    } else {
      dt = step / 2.0;
      if (dt < total * 1e-12)
        throw NumericalError("Krylov exponential failed to converge (time step underflow)");
    }
  }
  return v;
}

ExpmBackend resolve_backend(const ExpmOptions& o, Eigen::Index n) {
  if (o.backend != ExpmBackend::Auto) return o.backend;
  return n <= o.dense_limit ? ExpmBackend::Dense : ExpmBackend::Krylov;
}

}  // namespace

SparseHermitian::SparseHermitian(Eigen::SparseMatrix<cplx> h) : matrix_(std::move(h)) {
  if (matrix_.rows() != matrix_.cols()) throw ValidationError("Hamiltonian must be square");
  if (!all_finite(matrix_)) throw ValidationError("Hamiltonian has non-finite entries");
  Eigen::SparseMatrix<cplx> adj = matrix_.adjoint();
  Eigen::SparseMatrix<cplx> diff = matrix_ - adj;
  if (max_abs_coeff(diff) > 1e-12) throw ValidationError("Hamiltonian is not Hermitian");
  matrix_.makeCompressed();
  real_ = true;
  for (int k = 0; k < matrix_.outerSize() && real_; ++k)
    for (Eigen::SparseMatrix<cplx>::InnerIterator it(matrix_, k); it; ++it)
      if (it.value().imag() != 0.0) {
        real_ = false;
        break;
      }
}

SparseHermitian SparseHermitian::from_real(const Eigen::SparseMatrix<double>& h) {
  return SparseHermitian(Eigen::SparseMatrix<cplx>(h.cast<cplx>()));
}

Eigen::SparseMatrix<double> SparseHermitian::real_part() const { return matrix_.real(); }

double estimate_spectral_norm(const Eigen::SparseMatrix<cplx>& h, int iterations) {
  return power_iteration_norm(h, iterations);
}

double estimate_spectral_norm(const Eigen::SparseMatrix<double>& h, int iterations) {
  return power_iteration_norm(h, iterations);
}

UnitaryPropagator::UnitaryPropagator(SparseHermitian h, ExpmOptions options)
    : h_(std::move(h)), options_(options), backend_(resolve_backend(options, h_.dim())) {
  validate_options(options_);
  if (backend_ == ExpmBackend::Dense) {
    if (h_.is_real()) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(h_.real_part()));
      if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigendecomposition failed");
      eigenvalues_ = es.eigenvalues();
      real_eigenvectors_ = es.eigenvectors();
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(h_.matrix()));
      if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigendecomposition failed");
      eigenvalues_ = es.eigenvalues();
      complex_eigenvectors_ = es.eigenvectors();
    }
  } else {
    norm_estimate_ = estimate_spectral_norm(h_.matrix(), 20);
  }
}

AmplitudeVector UnitaryPropagator::apply(const AmplitudeVector& v, double t) const {
  if (v.size() != h_.dim()) throw ValidationError("state dimension does not match Hamiltonian");
  if (!std::isfinite(t)) throw ValidationError("evolution time must be finite");
  if (!v.allFinite()) throw ValidationError("state has non-finite entries");
  if (!(v.norm() > 0.0)) throw ValidationError("cannot evolve the zero vector");
  if (t == 0.0) return v;

  if (backend_ == ExpmBackend::Krylov) {
    auto phase = [](double lambda, double dt) { return std::exp(cplx(0.0, -lambda * dt)); };
    return krylov_apply<cplx>(h_.matrix(), v, t, phase, norm_estimate_, options_, true);
  }

  const Eigen::Index n = eigenvalues_.size();
  Eigen::VectorXcd phases(n);
  for (Eigen::Index i = 0; i < n; ++i) phases[i] = std::exp(cplx(0.0, -eigenvalues_[i] * t));
  if (h_.is_real()) {
    Eigen::VectorXd re = real_eigenvectors_.transpose() * v.real();
    Eigen::VectorXd im = real_eigenvectors_.transpose() * v.imag();
    Eigen::VectorXcd c(n);
    for (Eigen::Index i = 0; i < n; ++i) c[i] = cplx(re[i], im[i]) * phases[i];
    Eigen::VectorXd out_re = real_eigenvectors_ * c.real();
    Eigen::VectorXd out_im = real_eigenvectors_ * c.imag();
    AmplitudeVector out(n);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = cplx(out_re[i], out_im[i]);
    return out;
  }
  Eigen::VectorXcd c = complex_eigenvectors_.adjoint() * v;
  return complex_eigenvectors_ * phases.cwiseProduct(c);
}

DiffusionPropagator::DiffusionPropagator(Eigen::SparseMatrix<double> l, ExpmOptions options)
    : l_(std::move(l)), options_(options), backend_(resolve_backend(options, l_.rows())) {
  validate_options(options_);
  if (l_.rows() != l_.cols()) throw ValidationError("generator must be square");
  if (!all_finite(l_)) throw ValidationError("generator has non-finite entries");
  const double scale = std::max(1.0, max_abs_coeff(l_));
  Eigen::SparseMatrix<double> lt = l_.transpose();
  Eigen::SparseMatrix<double> diff = l_ - lt;
  if (max_abs_coeff(diff) > 1e-12 * scale) throw ValidationError("generator is not symmetric");
  Eigen::VectorXd row_sums = l_ * Eigen::VectorXd::Ones(l_.cols());
  if (row_sums.size() > 0 && row_sums.cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw ValidationError("generator rows must sum to zero");
  l_.makeCompressed();
  if (backend_ == ExpmBackend::Dense) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(l_)};
    if (es.info() != Eigen::Success) throw NumericalError("Laplacian eigendecomposition failed");
    eigenvalues_ = es.eigenvalues();
    eigenvectors_ = es.eigenvectors();
  }
}

ProbabilityVector DiffusionPropagator::apply(const ProbabilityVector& p, double t) const {
  if (p.size() != l_.rows()) throw ValidationError("probability vector dimension does not match generator");
  if (!std::isfinite(t) || t < 0.0) throw ValidationError("diffusion time must be finite and nonnegative");
  validate_probability_vector(p);
  if (t == 0.0) return p;

  ProbabilityVector out;
  if (backend_ == ExpmBackend::Krylov) {
    auto decay = [](double lambda, double dt) { return std::exp(-lambda * dt); };
    out = krylov_apply<double>(l_, p, t, decay, estimate_spectral_norm(l_, 20), options_, true, &l_);
  } else {
    Eigen::VectorXd c = eigenvectors_.transpose() * p;
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] *= std::exp(-eigenvalues_[i] * t);
    out = eigenvectors_ * c;
  }

  const double clip = std::max(1e-12, 10.0 * options_.tol);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out[i] < 0.0) {
      if (out[i] < -clip) throw NumericalError("diffusion produced a negative probability beyond tolerance");
      out[i] = 0.0;
    }
  }
  const double mass = out.sum();
  if (!(mass > 0.0)) throw NumericalError("diffusion lost all probability mass");
  out *= p.sum() / mass;
  return out;
}

AmplitudeVector expm_action(const SparseHermitian& h, const AmplitudeVector& v, double t, const ExpmOptions& options) {
  if (t == 0.0 || h.matrix().nonZeros() == 0) {
    validate_options(options);
    if (v.size() != h.dim()) throw ValidationError("state dimension does not match Hamiltonian");
    if (!(v.norm() > 0.0)) throw ValidationError("cannot evolve the zero vector");
    return v;
  }
  return UnitaryPropagator(h, options).apply(v, t);
}

ProbabilityVector real_expm_action(const Eigen::SparseMatrix<double>& l, const ProbabilityVector& p, double t,
                                   const ExpmOptions& options) {
  return DiffusionPropagator(l, options).apply(p, t);
}

void validate_probability_vector(const Eigen::VectorXd& p, double tolerance) {
  if (!p.allFinite()) throw ValidationError("probability vector has non-finite entries");
  if (p.size() > 0 && p.minCoeff() < 0.0) throw ValidationError("probability vector has negative entries");
  if (std::abs(p.sum() - 1.0) > tolerance)
    throw ValidationError("probability vector must sum to 1 (sum = " + std::to_string(p.sum()) + ")");
}

}  // namespace qwalk
