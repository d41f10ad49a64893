#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "zk/spacetime.hpp"

namespace zk {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// One evaluated norm with its parameters and any caveat (window leakage,
/// sampling rate, proxy substitution).
struct NormReport {
  std::string name;
  double value = 0.0;
  std::vector<std::pair<std::string, double>> parameters;
  std::string caveat;

  double parameter(const std::string& key, double fallback = std::numeric_limits<double>::quiet_NaN()) const;
};

/// CSV layout of a NormReport row: name,value,s,b,p,q,r,caveat.
std::string norm_report_csv_header();
std::string to_csv_row(const NormReport& report);

// --- single-time norms ------------------------------------------------------

double l2_norm(const Field& f);
/// (∫|u|^r)^{1/r} by lattice quadrature of the physical samples; r = ∞ is the
/// sample maximum.
double lr_norm(const Field& f, double r);
/// ‖⟨ζ⟩^s û‖ with ⟨a⟩ = (1+a²)^{1/2}.
double sobolev_norm(const Field& f, double s);
/// ‖|ζ|^s û‖. For s < 0 the zero mode must vanish (DomainError otherwise);
/// for s ≥ 0 the zero mode contributes 0^s (1 when s = 0).
double homogeneous_sobolev_norm(const Field& f, double s);
/// ‖P₀u‖₂ + Σ_N N^s ‖P_N u‖₂ over the dyadic shells meeting the lattice.
double besov_norm_2_1(const Field& f, double s);

// --- space-time norms -------------------------------------------------------

/// (∫(∫|F|^r dxdy)^{q/r} dt)^{1/q}: trapezoidal rule in t, lattice sums in
/// (x, y). q or r = ∞ take maxima. With apply_window the taper multiplies F.
double mixed_lebesgue_norm(const SpaceTimeField& stf, double q, double r, bool apply_window = false);

/// (dt Σ_k ‖w_k u_k‖²)^{1/2}: the rectangle rule that matches the discrete
/// Fourier transform in time (and the trapezoid rule under a Hann taper).
double space_time_l2(const SpaceTimeField& stf, bool apply_window = true);

/// ‖⟨ζ⟩^s ⟨τ − ω(ζ)⟩^b û(ζ, τ)‖ over the discrete (ζ, τ) lattice of the
/// tapered trajectory. Throws ResolutionError with fewer than 8 samples.
NormReport xsb_norm(const SpaceTimeField& stf, double s, double b, Form form);

// --- p-variation ------------------------------------------------------------

/// sup over subsequences 0 = i₀ < … < i_m = K−1 of (Σ d(i_{l−1}, i_l)^p)^{1/p},
/// found exactly by dynamic programming over the K² pairs. Adding an index
/// never lowers the sum, so optimal subsequences contain both endpoints.
double pvariation_norm(std::size_t count, const std::function<double(std::size_t, std::size_t)>& distance,
                       double p);
double pvariation_norm(const std::vector<double>& samples, double p);
/// Sequence of fields measured in L².
double pvariation_norm(const std::vector<Field>& samples, double p);

/// pvariation_norm of the frames pulled back by the free flow,
/// e^{−t_k S} u(t_k). Zero for exact free solutions. No taper is applied.
double twisted_variation(const SpaceTimeField& stf, double p, Form form);

/// As twisted_variation but on the window-restricted function, i.e. with the
/// value 0 appended before the first and after the last sample (the V^p
/// convention v(±∞) = 0 applied to 1_{[t₀, t_{K−1}]}·v).
double windowed_twisted_variation(const SpaceTimeField& stf, double p, Form form);

/// Σ_N N^{1/2} twisted_variation(P_N u, 2) plus the core block: the V²
/// stand-in for the Y^{1/2} norm. With `windowed` each piece uses
/// windowed_twisted_variation instead.
double y_half_proxy(const SpaceTimeField& stf, Form form, bool windowed = false);

/// The frames of stf pulled back by e^{−t_k S}.
std::vector<Field> twisted_frames(const SpaceTimeField& stf, Form form);

}  // namespace zk
