#pragma once

#include <functional>

#include "phasespace/linalg.hpp"

namespace phasespace {

inline constexpr double kDefaultSymplecticTolerance = 1e-9;
inline constexpr double kSymmetryTolerance = 1e-12;

/// The fixed matrices of an N-mode phase space.
///
/// Quadratures are ordered Q = (p1..pN, q1..qN) and ladder operators
/// A = (a1..aN, a1†..aN†) with a = (q + ip)/√2, so that Q = U·A.
struct SymplecticForm {
  int n_modes = 0;
  RealMatrix sigma;            // Σ, real antisymmetric, Σ² = -I
  ComplexMatrix ladder_sigma;  // σ = U†ΣU*, imaginary antisymmetric
  RealMatrix swap;             // σ_Nx
  ComplexMatrix u;             // U, unitary

  static SymplecticForm of(int n_modes);
};

/// H = ½ Q·B(t)·Q + C(t)·Q with ħ = 1.
class QuadraticHamiltonian {
 public:
  using MatrixFn = std::function<RealMatrix(double)>;
  using VectorFn = std::function<RealVector(double)>;

  // B must be symmetric; C may be empty (no linear drive).
  static QuadraticHamiltonian constant(const RealMatrix& b, const RealVector& c = {});
  static QuadraticHamiltonian time_dependent(int n_modes, MatrixFn b, VectorFn c = {});

  int n_modes() const { return n_modes_; }
  int dim() const { return 2 * n_modes_; }
  bool is_time_independent() const { return constant_; }

  // Evaluate and validate: wrong shape raises DimensionMismatch, asymmetry
  // beyond kSymmetryTolerance raises NonSymmetricB.
  RealMatrix b(double t) const;
  RealVector c(double t) const;

  // Largest max-row-sum norm of B over a uniform sample of [0, t_final].
  double norm_bound(double t_final) const;

 private:
  QuadraticHamiltonian(int n_modes, bool constant, MatrixFn b, VectorFn c);

  int n_modes_ = 0;
  bool constant_ = false;
  MatrixFn b_;
  VectorFn c_;
};

/// Real linear integrals of motion Q0 = Λ(t)Q + Δ(t).
///
/// Construction rejects Λ whose symplectic defect exceeds the tolerance.
class PropagatorReal {
 public:
  PropagatorReal(RealMatrix lambda, RealVector delta, double time,
                 double tol = kDefaultSymplecticTolerance);

  static PropagatorReal identity(int n_modes);

  const RealMatrix& lambda() const { return lambda_; }
  const RealVector& delta() const { return delta_; }
  double time() const { return time_; }
  int n_modes() const { return static_cast<int>(lambda_.rows() / 2); }

  // Maps Q0 back to Q: Λ⁻¹ and -Λ⁻¹Δ.
  PropagatorReal inverse(double tol = kDefaultSymplecticTolerance) const;

 private:
  RealMatrix lambda_;
  RealVector delta_;
  double time_ = 0.0;
};

/// Ladder-operator integrals of motion A0 = M(t)A + N(t).
class PropagatorComplex {
 public:
  PropagatorComplex(ComplexMatrix m, ComplexVector n_vec, double time,
                    double tol = kDefaultSymplecticTolerance);

  const ComplexMatrix& m() const { return m_; }
  const ComplexVector& n_vec() const { return n_vec_; }
  double time() const { return time_; }
  int n_modes() const { return static_cast<int>(m_.rows() / 2); }

 private:
  ComplexMatrix m_;
  ComplexVector n_vec_;
  double time_ = 0.0;
};

// ‖ΛΣΛᵀ − Σ‖ as the largest entry magnitude.
double symplectic_defect(const RealMatrix& lambda);
// ‖MσMᵀ − σ‖, the ladder-basis analogue.
double ladder_symplectic_defect(const ComplexMatrix& m);

// ceil(200 · t · max‖B‖∞), at least 1.
int default_steps(const QuadraticHamiltonian& h, double t_final);

/// Fixed-step RK4 on Λ̇ = ΛΣB(t), Δ̇ = ΛΣC(t) from Λ(0) = I, Δ(0) = 0.
PropagatorReal evolve_real(const QuadraticHamiltonian& h, double t_final, int n_steps,
                           double tol = kDefaultSymplecticTolerance);

/// Fixed-step RK4 on Ṁ = MσD(t), Ṅ = MσE(t) with D = UᵀBU and E = UᵀC.
PropagatorComplex evolve_complex(const QuadraticHamiltonian& h, double t_final, int n_steps,
                                 double tol = kDefaultSymplecticTolerance);

/// Λ = exp(ΣBt) and Δ = ∫₀ᵗ exp(ΣBτ)ΣC dτ for a time-independent Hamiltonian.
///
/// Both come out of one exponential of the bordered matrix [[ΣB, ΣC], [0, 0]],
/// so singular ΣB needs no special case.
PropagatorReal propagator_const(const RealMatrix& b, const RealVector& c, double t,
                                double tol = kDefaultSymplecticTolerance);

// M = exp(σDt), N = ∫₀ᵗ exp(σDτ)σE dτ, same bordered construction.
PropagatorComplex propagator_const_complex(const RealMatrix& b, const RealVector& c, double t,
                                           double tol = kDefaultSymplecticTolerance);

// M = U†ΛU, N = U†Δ.
PropagatorComplex real_to_complex(const PropagatorReal& p,
                                  double tol = kDefaultSymplecticTolerance);
// Λ = UMU†, Δ = UN. Imaginary residue above 1e-10 raises NonRealResult.
PropagatorReal complex_to_real(const PropagatorComplex& p,
                               double tol = kDefaultSymplecticTolerance);

// Propagator over [0, t1 + t2] from one over [0, t1] followed by one over the
// next t2 (only meaningful for time-independent Hamiltonians).
PropagatorReal compose(const PropagatorReal& first, const PropagatorReal& second,
                       double tol = kDefaultSymplecticTolerance);

}  // namespace phasespace
