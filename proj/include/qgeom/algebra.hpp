#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qgeom/error.hpp"
#include "qgeom/planck_units.hpp"
#include "qgeom/spin.hpp"
#include "qgeom/vec3.hpp"

namespace qgeom {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Largest dense representation built by default (j <= 2000).
inline constexpr std::int64_t default_dimension_cap = 4001;

/**
 * Irreducible representation of the position algebra
 *
 *     [x_i, x_j] = i lambda eps_ijk x_k
 *
 * at spin j, realized as x_i = lambda J_i with J_i the angular-momentum
 * matrices in the J_3 eigenbasis. Basis index a = 0..2j carries
 * m = j - a, so x3 is diagonal with descending entries.
 */
class AlgebraRep {
 public:
  /// Wraps arbitrary matrices without checking the algebra; used to
  /// construct deliberately broken fixtures.
  static AlgebraRep unchecked(Spin spin, double lambda, ComplexMatrix x1, ComplexMatrix x2,
                              ComplexMatrix x3) {
    const auto d = spin.dimension();
    for (const auto* m : {&x1, &x2, &x3}) {
      if (m->rows() != d || m->cols() != d) {
        throw Error(ErrorKind::shape, "component matrices must be (2j+1)x(2j+1)");
      }
    }
    return AlgebraRep(spin, lambda, {std::move(x1), std::move(x2), std::move(x3)});
  }

  Spin spin() const noexcept { return spin_; }
  Eigen::Index dim() const noexcept { return static_cast<Eigen::Index>(spin_.dimension()); }
  double lambda() const noexcept { return lambda_; }

  /// Component i in {0, 1, 2}.
  const ComplexMatrix& x(int i) const { return x_.at(static_cast<std::size_t>(i)); }
  const ComplexMatrix& x1() const noexcept { return x_[0]; }
  const ComplexMatrix& x2() const noexcept { return x_[1]; }
  const ComplexMatrix& x3() const noexcept { return x_[2]; }

 private:
  AlgebraRep(Spin spin, double lambda, std::array<ComplexMatrix, 3> x)
      : spin_(spin), lambda_(lambda), x_(std::move(x)) {}

  friend AlgebraRep build_representation(Spin, const PlanckScale&, std::int64_t);

  Spin spin_;
  double lambda_;
  std::array<ComplexMatrix, 3> x_;
};

/// Normalized amplitudes in the eigenbasis of a representation.
class StateVector {
 public:
  StateVector(Spin spin, ComplexVector amplitudes) : spin_(spin), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != spin.dimension()) {
      throw Error(ErrorKind::shape, "state length must equal 2j+1");
    }
    if (std::abs(amplitudes_.norm() - 1.0) > 1e-12) {
      throw Error(ErrorKind::invalid_input, "state vector must have unit norm");
    }
  }

  Spin spin() const noexcept { return spin_; }
  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }

 private:
  Spin spin_;
  ComplexVector amplitudes_;
};

inline AlgebraRep build_representation(Spin spin, const PlanckScale& scale,
                                       std::int64_t dimension_cap = default_dimension_cap) {
  const std::int64_t d = spin.dimension();
  if (d > dimension_cap) {
    throw Error(ErrorKind::capacity, "dimension " + std::to_string(d) + " exceeds cap " +
                                         std::to_string(dimension_cap));
  }
  const double lambda = scale.lambda();
  const auto n = static_cast<Eigen::Index>(d);
  const std::int64_t tj = spin.twice();

  ComplexMatrix x1 = ComplexMatrix::Zero(n, n);
  ComplexMatrix x2 = ComplexMatrix::Zero(n, n);
  ComplexMatrix x3 = ComplexMatrix::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const std::int64_t tm = tj - 2 * a;  // 2m
    x3(a, a) = lambda * 0.5 * static_cast<double>(tm);
    if (a > 0) {
      // <m+1| J+ |m> = sqrt((j-m)(j+m+1)); both factors are exact in units of 1/2.
      const double raised = static_cast<double>(tj - tm) * static_cast<double>(tj + tm + 2) / 4.0;
      const double e = 0.5 * lambda * std::sqrt(raised);
      // J1 = (J+ + J-)/2, J2 = (J+ - J-)/(2i)
      x1(a - 1, a) = e;
      x1(a, a - 1) = e;
      x2(a - 1, a) = std::complex<double>(0.0, -e);
      x2(a, a - 1) = std::complex<double>(0.0, e);
    }
  }
  return AlgebraRep(spin, lambda, {std::move(x1), std::move(x2), std::move(x3)});
}

/// Worst relative violation of [x_i, x_j] = i lambda eps_ijk x_k over the
/// three cyclic pairs, in Frobenius norm relative to lambda |x_k|.
inline double commutator_residual(const AlgebraRep& rep) {
  constexpr std::array<std::array<int, 3>, 3> cyclic{{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}};
  const std::complex<double> i_lambda(0.0, rep.lambda());
  double worst = 0.0;
  ComplexMatrix lhs;
  for (const auto& [i, j, k] : cyclic) {
    lhs.noalias() = rep.x(i) * rep.x(j);
    lhs.noalias() -= rep.x(j) * rep.x(i);
    lhs -= i_lambda * rep.x(k);
    const double num = lhs.norm();
    const double den = rep.lambda() * rep.x(k).norm();
    if (den == 0.0) {
      if (num != 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    worst = std::max(worst, num / den);
  }
  return worst;
}

/// max_i |x_i - x_i^dagger| / |x_i| (zero components count as exact).
inline double hermiticity_residual(const AlgebraRep& rep) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double n = rep.x(i).norm();
    if (n == 0.0) continue;
    worst = std::max(worst, (rep.x(i) - rep.x(i).adjoint()).norm() / n);
  }
  return worst;
}

inline ComplexMatrix casimir(const AlgebraRep& rep) {
  ComplexMatrix c = rep.x1() * rep.x1();
  c.noalias() += rep.x2() * rep.x2();
  c.noalias() += rep.x3() * rep.x3();
  return c;
}

/// |x1^2 + x2^2 + x3^2 - lambda^2 j(j+1) I| / (lambda^2 j(j+1)).
inline double casimir_residual(const AlgebraRep& rep) {
  const double j = rep.spin().value();
  const double expected = rep.lambda() * rep.lambda() * j * (j + 1.0);
  ComplexMatrix diff = casimir(rep);
  diff.diagonal().array() -= expected;
  if (expected == 0.0) return diff.norm();
  return diff.norm() / expected;
}

inline ComplexMatrix axis_operator(const AlgebraRep& rep, const Vec3& axis) {
  return axis[0] * rep.x1() + axis[1] * rep.x2() + axis[2] * rep.x3();
}

inline void require_unit_axis(const Vec3& axis) {
  if (!(std::abs(norm(axis) - 1.0) <= 1e-12)) {
    throw Error(ErrorKind::invalid_input, "axis must have unit Euclidean norm");
  }
}

/// Ascending eigenvalues of axis . x.
inline std::vector<double> axis_spectrum(const AlgebraRep& rep, const Vec3& axis) {
  require_unit_axis(axis);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(axis_operator(rep, axis), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// lambda sqrt(j(j+1)); closed form, no matrices.
inline double radial_observable(Spin spin, const PlanckScale& scale) {
  const double j = spin.value();
  return scale.lambda() * std::sqrt(j * (j + 1.0));
}

inline double radial_observable(const AlgebraRep& rep) {
  const double j = rep.spin().value();
  return rep.lambda() * std::sqrt(j * (j + 1.0));
}

/// L = (x_i x_i)^{1/2} as a matrix, via the Hermitian square root of the Casimir.
inline ComplexMatrix radial_operator(const AlgebraRep& rep) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(casimir(rep));
  return solver.operatorSqrt();
}

/// max_i |[L, x_i]| / (|L|_2 |x_i|); L is a multiple of the identity, so
/// this measures only rounding.
inline double radial_commutator_residual(const AlgebraRep& rep) {
  const ComplexMatrix radial = radial_operator(rep);
  const double radial_norm = radial_observable(rep);
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double xn = rep.x(i).norm();
    if (xn == 0.0 || radial_norm == 0.0) continue;
    ComplexMatrix comm = radial * rep.x(i);
    comm.noalias() -= rep.x(i) * radial;
    worst = std::max(worst, comm.norm() / (radial_norm * xn));
  }
  return worst;
}

/// Eigenvector of axis . x with the largest eigenvalue (+j lambda). The phase
/// is fixed so the largest-magnitude amplitude is real and positive.
inline StateVector highest_weight_state(const AlgebraRep& rep, const Vec3& axis) {
  require_unit_axis(axis);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(axis_operator(rep, axis));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::degeneracy, "eigen-decomposition did not converge");
  }
  const auto n = rep.dim();
  const auto& ev = solver.eigenvalues();
  if (n > 1 && ev(n - 1) - ev(n - 2) < 1e-10 * rep.lambda()) {
    throw Error(ErrorKind::degeneracy, "top eigenvalue is degenerate");
  }
  ComplexVector v = solver.eigenvectors().col(n - 1);
  Eigen::Index top = 0;
  v.cwiseAbs().maxCoeff(&top);
  v *= std::conj(v(top)) / std::abs(v(top));
  v.normalize();
  return StateVector(rep.spin(), std::move(v));
}

/// <psi| axis . x |psi>.
inline double projection_expectation(const AlgebraRep& rep, const StateVector& state, const Vec3& axis) {
  if (state.spin() != rep.spin()) throw Error(ErrorKind::shape, "state does not belong to representation");
  const ComplexVector& psi = state.amplitudes();
  return psi.dot(axis_operator(rep, axis) * psi).real();
}

/// <psi| x_perp^2 |psi>, summing the two components orthogonal to axis.
inline double transverse_variance_operator(const AlgebraRep& rep, const StateVector& state,
                                           const Vec3& axis) {
  if (state.spin() != rep.spin() || state.amplitudes().size() != rep.dim()) {
    throw Error(ErrorKind::shape, "state does not belong to representation");
  }
  require_unit_axis(axis);
  // Orthonormal pair spanning the plane perpendicular to axis.
  const Vec3 helper = std::abs(axis[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  const Vec3 e1 = normalized(cross(axis, helper));
  const Vec3 e2 = cross(axis, e1);
  const ComplexVector& psi = state.amplitudes();
  return (axis_operator(rep, e1) * psi).squaredNorm() + (axis_operator(rep, e2) * psi).squaredNorm();
}

/// lambda^2 j: the highest-weight transverse variance without matrices.
inline double highest_weight_transverse_variance(Spin spin, const PlanckScale& scale) {
  return scale.lambda() * scale.lambda() * spin.value();
}

inline void require_positive(double value, ErrorKind kind, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(kind, std::string(what) + " must be positive and finite");
  }
}

/// <dtheta^2> = c t_P / (sqrt(4 pi) L) = lambda / L.
inline double angular_variance_formula(double separation, const PlanckScale& scale) {
  require_positive(separation, ErrorKind::invalid_separation, "separation L");
  return scale.lambda() / separation;
}

/// <x_perp^2> = L c t_P / sqrt(4 pi) = lambda L.
inline double transverse_variance_formula(double separation, const PlanckScale& scale) {
  require_positive(separation, ErrorKind::invalid_separation, "separation L");
  return scale.lambda() * separation;
}

/// Holographic count of geometric degrees of freedom in a 3-sphere, 4 pi (R / c t_P)^2.
inline double state_count_continuum(double radius, const PlanckScale& scale) {
  require_positive(radius, ErrorKind::invalid_radius, "radius R");
  const double r = radius / scale.planck_length();
  return 4.0 * std::numbers::pi * r * r;
}

/// Eigenstates summed over integer spins 0..j: sum (2j'+1) = (j+1)^2.
inline std::uint64_t state_count_discrete(std::int64_t max_spin) {
  if (max_spin < 0) throw Error(ErrorKind::invalid_spin, "max spin must be non-negative");
  if (max_spin >= 4294967295LL) throw Error(ErrorKind::capacity, "count overflows 64 bits");
  const auto n = static_cast<std::uint64_t>(max_spin) + 1;
  return n * n;
}

inline std::uint64_t state_count_discrete(Spin max_spin) {
  if (!max_spin.is_integer()) throw Error(ErrorKind::invalid_spin, "state counting uses integer spins only");
  return state_count_discrete(max_spin.twice() / 2);
}

}  // namespace qgeom
