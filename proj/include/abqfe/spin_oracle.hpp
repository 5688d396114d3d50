#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "abqfe/likelihood.hpp"

namespace abqfe {

enum class Axis { x, y, z };

// Exact density-matrix model of N-atom GHZ Ramsey interferometry in the Dicke
// basis of the symmetric subspace. Basis index i = 0..N corresponds to the
// half-population difference m = i - N/2 (ascending). Every closed-form
// likelihood in the library is validated against this model.
class SpinOracle {
 public:
  using Matrix = Eigen::MatrixXcd;
  using Vector = Eigen::VectorXd;

  explicit SpinOracle(int n_atoms) : n_(n_atoms), dim_(n_atoms + 1) {
    if (n_atoms < 1) throw std::invalid_argument("SpinOracle: need at least one atom");
    Matrix jp = Matrix::Zero(dim_, dim_);  // raising operator J+
    double jq = 0.5 * double(n_);
    for (int i = 0; i + 1 < dim_; ++i) {
      double m = m_of(i);
      jp(i + 1, i) = std::sqrt(jq * (jq + 1.0) - m * (m + 1.0));
    }
    Matrix jm = jp.adjoint();
    jx_ = 0.5 * (jp + jm);
    jy_ = std::complex<double>(0, -0.5) * (jp - jm);
    Eigen::SelfAdjointEigenSolver<Matrix> sx(jx_), sy(jy_);
    ex_vals_ = sx.eigenvalues();
    ex_vecs_ = sx.eigenvectors();
    ey_vals_ = sy.eigenvalues();
    ey_vecs_ = sy.eigenvectors();
  }

  int n_atoms() const { return n_; }
  int dim() const { return dim_; }
  double m_of(int i) const { return double(i) - 0.5 * double(n_); }

  // (|m=-N/2> + |m=+N/2>) / sqrt(2) as a density matrix.
  Matrix make_ghz() const {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim_);
    psi(0) = 1.0 / std::sqrt(2.0);
    psi(dim_ - 1) = 1.0 / std::sqrt(2.0);
    return psi * psi.adjoint();
  }

  // Free evolution at detuning delta (rad/s) for time t with collective
  // dephasing: rho_{m,m'} picks up exp(-i delta (m - m') t - gamma (m - m')^2 t).
  void evolve_ramsey(Matrix& rho, double delta, double t, double gamma = 0.0) const {
    for (int i = 0; i < dim_; ++i)
      for (int k = 0; k < dim_; ++k) {
        double dm = m_of(i) - m_of(k);
        rho(i, k) *= std::exp(std::complex<double>(-gamma * dm * dm * t, -delta * dm * t));
      }
  }

  // rho -> U rho U^dagger with U = exp(-i angle J_axis).
  void apply_rotation(Matrix& rho, Axis axis, double angle) const {
    if (axis == Axis::z) {
      for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < dim_; ++k)
          rho(i, k) *= std::exp(std::complex<double>(0, -angle * (m_of(i) - m_of(k))));
      return;
    }
    const auto& vals = axis == Axis::x ? ex_vals_ : ey_vals_;
    const auto& vecs = axis == Axis::x ? ex_vecs_ : ey_vecs_;
    Eigen::VectorXcd ph(dim_);
    for (int i = 0; i < dim_; ++i) ph(i) = std::exp(std::complex<double>(0, -angle * vals(i)));
    Matrix u = vecs * ph.asDiagonal() * vecs.adjoint();
    rho = u * rho * u.adjoint();
  }

  // One-axis-twisting readout exp(-i (pi/2) J_x^2); for odd N a further
  // exp(-i (pi/2) J_x) aligns the resulting superposition with the J_z axis.
  void apply_twist_readout(Matrix& rho) const {
    Eigen::VectorXcd ph(dim_);
    for (int i = 0; i < dim_; ++i)
      ph(i) = std::exp(std::complex<double>(0, -0.5 * kPi * ex_vals_(i) * ex_vals_(i)));
    Matrix u = ex_vecs_ * ph.asDiagonal() * ex_vecs_.adjoint();
    rho = u * rho * u.adjoint();
    if (n_ % 2 == 1) apply_rotation(rho, Axis::x, 0.5 * kPi);
  }

  Vector populations(const Matrix& rho) const {
    Vector p(dim_);
    for (int i = 0; i < dim_; ++i) p(i) = std::max(0.0, rho(i, i).real());
    return p;
  }

  // Gaussian detection blur of width sigma_d over the discrete m grid,
  // followed by a single global renormalization.
  Vector apply_detection_noise(const Vector& p, double sigma_d) const {
    if (!(sigma_d > 0)) return p;
    Vector q = Vector::Zero(dim_);
    double inv = 1.0 / (2.0 * sigma_d * sigma_d);
    for (int i = 0; i < dim_; ++i)
      for (int k = 0; k < dim_; ++k) {
        double d = m_of(i) - m_of(k);
        q(i) += p(k) * std::exp(-d * d * inv);
      }
    double z = q.sum();
    if (!(z > 0)) throw std::runtime_error("apply_detection_noise: zero total population");
    return q / z;
  }

  // Parity eigenvalue (-1)^(N/2 - m) = (-1)^(N - i) of basis state i.
  double parity_value(int i) const { return (n_ - i) % 2 == 0 ? 1.0 : -1.0; }

  // Sign of the half-population difference; m = 0 counts as negative.
  double sign_value(int i) const { return m_of(i) > 0 ? 1.0 : -1.0; }

  double parity_expectation(const Vector& p) const {
    double s = 0;
    for (int i = 0; i < dim_; ++i) s += parity_value(i) * p(i);
    return s;
  }

  double sign_expectation(const Vector& p) const {
    double s = 0;
    for (int i = 0; i < dim_; ++i) s += sign_value(i) * p(i);
    return s;
  }

  double jz_expectation(const Vector& p) const {
    double s = 0;
    for (int i = 0; i < dim_; ++i) s += m_of(i) * p(i);
    return s;
  }

  // One full interrogation. Frequencies in Hz; phase is the auxiliary readout
  // phase phi applied as a collective z rotation by phi/N.
  struct Pipeline {
    double f = 0;
    double f_lo = 0;
    double t = 0;
    double phase = 0;
    double gamma = 0;
    double sigma_d = 0;
  };

  // Populations after the readout rotation. `twist` selects the sign readout
  // chain; otherwise a pi/2 rotation about y prepares the parity readout.
  Vector readout_populations(const Pipeline& ps, bool twist) const {
    Matrix rho = make_ghz();
    evolve_ramsey(rho, 2.0 * kPi * (ps.f - ps.f_lo), ps.t, ps.gamma);
    if (ps.phase != 0) apply_rotation(rho, Axis::z, ps.phase / double(n_));
    if (twist)
      apply_twist_readout(rho);
    else
      apply_rotation(rho, Axis::y, 0.5 * kPi);
    Vector p = populations(rho);
    return ps.sigma_d > 0 ? apply_detection_noise(p, ps.sigma_d) : p;
  }

  // P(u = +1) for the two binary readouts.
  double parity_plus_prob(const Pipeline& ps) const {
    Vector p = readout_populations(ps, false);
    double s = 0;
    for (int i = 0; i < dim_; ++i)
      if (parity_value(i) > 0) s += p(i);
    return s;
  }

  double sign_plus_prob(const Pipeline& ps) const {
    Vector p = readout_populations(ps, true);
    double s = 0;
    for (int i = 0; i < dim_; ++i)
      if (sign_value(i) > 0) s += p(i);
    return s;
  }

 private:
  int n_;
  int dim_;
  Matrix jx_, jy_;
  Eigen::VectorXd ex_vals_, ey_vals_;
  Matrix ex_vecs_, ey_vecs_;
};

}  // namespace abqfe
