#pragma once

// Action of matrix exponentials on vectors:
//   e^{-iHt} v  for Hermitian H   (quantum walks)
//   e^{-Lt}  p  for a graph Laplacian L (classical diffusion)
//
// Two backends. Dense: a cached eigendecomposition, used up to
// ExpmOptions::dense_limit nodes. Krylov: Lanczos with full
// reorthogonalisation and an adaptive subspace size; the time interval is
// split so that ||H|| * dt <= max_norm_step, and a substep is halved whenever
// the subspace cap is reached before the residual estimate drops below tol.

#include <complex>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace qwalk {

using cplx = std::complex<double>;
using AmplitudeVector = Eigen::VectorXcd;
using ProbabilityVector = Eigen::VectorXd;

/// Sparse matrix with H == H^dagger (entrywise, within 1e-12) and finite entries.
class SparseHermitian {
 public:
  SparseHermitian() = default;
  /// Throws ValidationError if `h` is not square, not Hermitian or not finite.
  explicit SparseHermitian(Eigen::SparseMatrix<cplx> h);
  static SparseHermitian from_real(const Eigen::SparseMatrix<double>& h);

  Eigen::Index dim() const { return matrix_.rows(); }
  const Eigen::SparseMatrix<cplx>& matrix() const { return matrix_; }
  /// True when every stored entry has a zero imaginary part.
  bool is_real() const { return real_; }
  Eigen::SparseMatrix<double> real_part() const;

 private:
  Eigen::SparseMatrix<cplx> matrix_;
  bool real_ = true;
};

enum class ExpmBackend { Auto, Dense, Krylov };

struct ExpmOptions {
  double tol = 1e-10;
  ExpmBackend backend = ExpmBackend::Auto;
  Eigen::Index dense_limit = 2000;
  double max_norm_step = 20.0;
  int krylov_max_dim = 120;
};

/// ||H||_2 estimate from power iteration.
double estimate_spectral_norm(const Eigen::SparseMatrix<cplx>& h, int iterations = 20);
double estimate_spectral_norm(const Eigen::SparseMatrix<double>& h, int iterations = 20);

/// Reusable e^{-iHt} for one Hamiltonian. The dense backend pays for the
/// eigendecomposition once, in the constructor.
class UnitaryPropagator {
 public:
  explicit UnitaryPropagator(SparseHermitian h, ExpmOptions options = {});

  AmplitudeVector apply(const AmplitudeVector& v, double t) const;

  ExpmBackend backend() const { return backend_; }
  const SparseHermitian& hamiltonian() const { return h_; }
  const ExpmOptions& options() const { return options_; }

 private:
  SparseHermitian h_;
  ExpmOptions options_;
  ExpmBackend backend_;
  double norm_estimate_ = 0.0;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd real_eigenvectors_;     // used when H is real
  Eigen::MatrixXcd complex_eigenvectors_;  // used otherwise
};

/// Reusable e^{-Lt} for a symmetric generator with zero row sums.
class DiffusionPropagator {
 public:
  /// Throws ValidationError if `l` is not symmetric or has nonzero row sums.
  explicit DiffusionPropagator(Eigen::SparseMatrix<double> l, ExpmOptions options = {});

  /// Requires t >= 0 and a probability vector. The result is clipped at
  /// max(1e-12, 10 tol) below zero and rescaled to the input mass. The
  /// Krylov backend stops early once the state lies in the null space of l.
  ProbabilityVector apply(const ProbabilityVector& p, double t) const;

  ExpmBackend backend() const { return backend_; }

 private:
  Eigen::SparseMatrix<double> l_;
  ExpmOptions options_;
  ExpmBackend backend_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

/// e^{-iHt} v. Requires ||v|| > 0 and tol in (0, 1e-4].
AmplitudeVector expm_action(const SparseHermitian& h, const AmplitudeVector& v, double t,
                            const ExpmOptions& options = {});

/// e^{-Lt} p for a Laplacian-like L and probability vector p.
ProbabilityVector real_expm_action(const Eigen::SparseMatrix<double>& l, const ProbabilityVector& p, double t,
                                   const ExpmOptions& options = {});

/// Throws ValidationError unless p is finite, nonnegative and sums to 1
/// within `tolerance`.
void validate_probability_vector(const Eigen::VectorXd& p, double tolerance = 1e-10);

}  // namespace qwalk
