#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "zk/spacetime.hpp"

namespace zk {

/// Smoothed multiplier m^s_N(|ζ|):
///   m = 1                      for |ζ| ≤ N,
///   m = (|ζ|/N)^{s−1}          for |ζ| ≥ 2N,
///   m = 2^{(s−1)·B(log₂(|ζ|/N))} in between, B(t) = 6t³ − 8t⁴ + 3t⁵.
/// B matches value, slope and curvature of both closed forms in log|ζ|, so
/// m is C², non-increasing, and m^s_N(ζ) = m^s_1(ζ/N).
class IMultiplier {
 public:
  /// Throws ConfigError unless s ∈ (1/2, 1] and N is a power of two ≥ 1.
  IMultiplier(double s, int N);

  double s() const { return s_; }
  int N() const { return N_; }
  double operator()(double radius) const;
  double operator()(Wavevector z) const;
  /// True if m ≡ 1 on every mode of the grid.
  bool is_identity_on(const Grid2D& g) const;

 private:
  double s_;
  int N_;
};

Field i_operator(const Field& f, const IMultiplier& m);
Field i_operator_inverse(const Field& f, const IMultiplier& m);

/// ∫u² by lattice quadrature of the real samples.
double mass(const Field& f);
/// ∫ ½|∇u|² − ⅓u³. The gradient is spectral; the cubic term is the exact
/// integral of (Pu)³ with P the 2/3 projection.
double energy(const Field& f);
double modified_energy(const Field& f, const IMultiplier& m);

/// How Λ₄ treats the pair frequency ζ₁+ζ₂.
enum class Lambda4Band {
  /// ζ₁+ζ₂ restricted to the 2/3 band: the functional that appears in the
  /// energy increment of the dealiased flow.
  Galerkin,
  /// Unrestricted pair frequency (the full hyperplane sum on ℤ²).
  Full,
};

/// A·Σ_{ζ₁+ζ₂+ζ₃=0} ξ₁|ζ₁|²[1 − m(ζ₂+ζ₃)/(m(ζ₂)m(ζ₃))] Π v̂(ζ_j), v = Iu,
/// evaluated as A·Σ ξ₁|ζ₁|² v̂(ζ₁)[(v²)^(−ζ₁) − m(ζ₁)(u²)^(−ζ₁)].
/// Throws DomainError if u is not 2/3-band-limited.
cplx lambda3(const Field& u, const IMultiplier& m);

/// A·Σ_{ζ₁+…+ζ₄=0} (ξ₁+ξ₂)·m(ζ₁+ζ₂)/(m(ζ₁)m(ζ₂)) Π v̂(ζ_j), evaluated as
/// A·Σ_ζ ξ m(ζ) (u²)^(ζ) (v²)^(−ζ). Throws DomainError if u is not
/// 2/3-band-limited.
cplx lambda4(const Field& u, const IMultiplier& m, Lambda4Band band = Lambda4Band::Galerkin);

/// Time derivative of E(Iu) along the dealiased original-form flow:
/// −iΛ₃ + iΛ₄ (Galerkin band). Real for real u.
double energy_increment_rate(const Field& u, const IMultiplier& m);

// --- general multilinear symbols -------------------------------------------

struct MultilinearSymbol {
  int arity = 3;
  /// Evaluated on k wavevectors that sum to zero.
  std::function<cplx(std::span<const Wavevector>)> eval;
  bool symmetrized = false;
};

/// [m]_sym = (1/k!) Σ_σ m(ζ_σ(1), …, ζ_σ(k)).
MultilinearSymbol symmetrize_symbol(const MultilinearSymbol& sym);

/// The Λ₃ and Λ₄ symbols above, to be paired with v = Iu.
MultilinearSymbol lambda3_symbol(const IMultiplier& m);
MultilinearSymbol lambda4_symbol(const IMultiplier& m);

/// A·Σ over (ζ₁, …, ζ_{k−1}) in the supports of the inputs with
/// ζ_k = −Σζ_j on the lattice, of sym(ζ) Π f̂_j(ζ_j). Direct summation; cost
/// grows like (support size)^{k−1}.
cplx hyperplane_sum(const MultilinearSymbol& sym, const std::vector<Field>& inputs);

// --- increment identity -------------------------------------------------------

struct IncrementReport {
  int N = 0;
  double s = 1.0;
  double delta = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  /// The residual is |lhs − rhs| / (|lhs| + |rhs| + floor).
  double floor = 1e-14;
  std::size_t nodes = 0;
  double quadrature_dt = 0.0;
  std::string quadrature;
  /// Largest |Re Λ|/(|Λ|+floor) seen; zero up to rounding for real data.
  double max_real_part = 0.0;
};

/// Compares E(Iu)(δ) − E(Iu)(0) with −i∫Λ₃ + i∫Λ₄ along an original-form
/// trajectory. The integrands are taken on every stride-th frame, where
/// stride = quadrature_dt / trajectory dt (0 uses every frame), and
/// integrated by composite Simpson (with a 3/8 tail for an odd interval count).
IncrementReport increment_identity_check(const SpaceTimeField& trajectory, const IMultiplier& m,
                                         double quadrature_dt = 0.0);

/// Composite Simpson over uniformly spaced values, 3/8 rule on the last three
/// intervals when their count is odd, trapezoid for two values.
double simpson(std::span<const double> values, double h);

struct ScanRow {
  int N = 0;
  double increment = 0.0;  // |ΔE(I_N u)|
  IncrementReport identity;
};

struct ScanResult {
  double s = 1.0;
  double delta = 0.0;
  std::vector<ScanRow> rows;
  double slope = 0.0;
  /// |E(u)(δ) − E(u)(0)| along the computed trajectory.
  double energy_drift = 0.0;
  std::string caveat;
};

struct ScanOptions {
  double dt = 2.5e-4;
  std::size_t sample_every = 20;
};

/// Evolves u0 (original form) to δ once and evaluates ΔE(I_N u) for each N,
/// together with the increment identity. N_list must be ascending powers of
/// two below the lattice radius (ConfigError otherwise).
ScanResult increment_scan(const Field& u0, double s, double delta, const std::vector<int>& N_list,
                          const ScanOptions& options = {});

/// Least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace zk
