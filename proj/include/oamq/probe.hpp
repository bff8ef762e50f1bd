#pragma once

// The four (d+1)-mode NOON-like probe families: a balanced superposition
// that places one single-mode state |psi> on one of d+1 modes and vacuum
// on the rest. All multimode photon-number statistics reduce to single-mode
// ones because the cross terms of the superposition are annihilated by the
// number operators; the reduction is exercised against an explicit tensor
// fixture in the tests.

#include <array>
#include <cmath>
#include <cstdlib>
#include <string>

#include "oamq/errors.hpp"
#include "oamq/fock.hpp"

namespace oamq {

enum class ProbeKind { mnoons, mecs, mesvs, mescs };

// Canonical emission order for sweeps and reports.
inline constexpr std::array<ProbeKind, 4> kProbeOrder = {
    ProbeKind::mnoons, ProbeKind::mecs, ProbeKind::mesvs, ProbeKind::mescs};

inline const char* probe_name(ProbeKind k) {
  switch (k) {
    case ProbeKind::mnoons: return "MNOONS";
    case ProbeKind::mecs: return "MECS";
    case ProbeKind::mesvs: return "MESVS";
    case ProbeKind::mescs: return "MESCS";
  }
  return "?";
}

inline ProbeKind probe_from_name(const std::string& s) {
  for (ProbeKind k : kProbeOrder) {
    if (s == probe_name(k)) return k;
  }
  throw InvalidParameterError("unknown probe kind: " + s);
}

// Which probe family, its single-mode parameters, and the mode count d + 1.
struct ProbeSpec {
  ProbeKind kind = ProbeKind::mnoons;
  int d = 1;        // number of estimated angular displacements
  int noon_n = 0;   // MNOONS: photon number N
  double alpha = 0.0;  // MECS: coherent amplitude
  double r1 = 0.0;     // MESVS: squeezing
  double beta = 0.0;   // MESCS: displacement
  double r2 = 0.0;     // MESCS: squeezing

  static ProbeSpec mnoons(int n, int d) {
    ProbeSpec p;
    p.kind = ProbeKind::mnoons;
    p.d = d;
    p.noon_n = n;
    p.validate();
    return p;
  }
  static ProbeSpec mecs(double alpha, int d) {
    ProbeSpec p;
    p.kind = ProbeKind::mecs;
    p.d = d;
    p.alpha = alpha;
    p.validate();
    return p;
  }
  static ProbeSpec mesvs(double r1, int d) {
    ProbeSpec p;
    p.kind = ProbeKind::mesvs;
    p.d = d;
    p.r1 = r1;
    p.validate();
    return p;
  }
  static ProbeSpec mescs(double beta, double r2, int d) {
    ProbeSpec p;
    p.kind = ProbeKind::mescs;
    p.d = d;
    p.beta = beta;
    p.r2 = r2;
    p.validate();
    return p;
  }

  void validate() const {
    if (d < 1) throw InvalidParameterError("probe needs d >= 1");
    switch (kind) {
      case ProbeKind::mnoons:
        if (noon_n < 1) throw InvalidParameterError("MNOONS needs N >= 1");
        break;
      case ProbeKind::mecs:
        if (!(alpha > 0.0)) throw InvalidParameterError("MECS needs alpha > 0");
        break;
      case ProbeKind::mesvs:
        if (!(r1 > 0.0)) throw InvalidParameterError("MESVS needs r1 > 0");
        break;
      case ProbeKind::mescs:
        if (beta < 0.0 || r2 < 0.0 || (beta == 0.0 && r2 == 0.0)) {
          throw InvalidParameterError("MESCS needs beta, r2 >= 0, not both 0");
        }
        break;
    }
  }
};

// Exact single-mode photon statistics of the constituent |psi>.
//   Fock N:              <n> = N,             <n^2> = N^2
//   coherent alpha:      <n> = a^2,           <n^2> = a^4 + a^2
//   squeezed vacuum r:   <n> = sinh^2 r,      <n^2> = 3 sinh^4 r + 2 sinh^2 r
//   squeezed coherent:   <n> = b^2 + sinh^2 r,
//                        <n^2> = <n>^2 + b^2 e^{2r} + 2 cosh^2 r sinh^2 r
inline SingleModeMoments single_mode_moments_closed(const ProbeSpec& p) {
  SingleModeMoments m;
  switch (p.kind) {
    case ProbeKind::mnoons: {
      const double n = double(p.noon_n);
      m.n_mean = n;
      m.n2_mean = n * n;
      m.a2dag_a2 = n * (n - 1.0);
      m.vac_overlap_sq = (p.noon_n == 0) ? 1.0 : 0.0;
      break;
    }
    case ProbeKind::mecs: {
      const double a2 = p.alpha * p.alpha;
      m.n_mean = a2;
      m.n2_mean = a2 * a2 + a2;
      m.a2dag_a2 = a2 * a2;
      m.vac_overlap_sq = std::exp(-a2);
      break;
    }
    case ProbeKind::mesvs: {
      const double s2 = std::sinh(p.r1) * std::sinh(p.r1);
      m.n_mean = s2;
      m.n2_mean = s2 * (3.0 * s2 + 2.0);
      m.a2dag_a2 = s2 * (3.0 * s2 + 1.0);
      m.vac_overlap_sq = 1.0 / std::cosh(p.r1);
      break;
    }
    case ProbeKind::mescs: {
      const double b2 = p.beta * p.beta;
      const double s = std::sinh(p.r2), c = std::cosh(p.r2);
      const double nmean = b2 + s * s;
      m.n_mean = nmean;
      m.n2_mean = nmean * nmean + b2 * std::exp(2.0 * p.r2) + 2.0 * c * c * s * s;
      m.a2dag_a2 = m.n2_mean - m.n_mean;
      m.vac_overlap_sq = std::exp(-b2 * (1.0 - std::tanh(p.r2))) / c;
      break;
    }
  }
  return m;
}

// Normalization of the balanced superposition for an arbitrary |psi>:
// 1 / [(1+d)(1 + d |<psi|0>|^2)].
inline double normalization_sq_generic(int d, double vac_overlap_sq) {
  return 1.0 / ((1.0 + d) * (1.0 + d * vac_overlap_sq));
}

// Per-family closed forms of the normalization.
inline double normalization_sq(const ProbeSpec& p) {
  p.validate();
  const double d = double(p.d);
  switch (p.kind) {
    case ProbeKind::mnoons:
      return 1.0 / (1.0 + d);
    case ProbeKind::mecs:
      return 1.0 / ((1.0 + d) * (1.0 + d * std::exp(-p.alpha * p.alpha)));
    case ProbeKind::mesvs:
      return 1.0 / ((1.0 + d) * (1.0 + d / std::cosh(p.r1)));
    case ProbeKind::mescs: {
      const double v = std::exp(-p.beta * p.beta * (1.0 - std::tanh(p.r2))) /
                       std::cosh(p.r2);
      return 1.0 / ((1.0 + d) * (1.0 + d * v));
    }
  }
  std::abort();
}

// Per-mode statistics of the full probe state. g2_m is the intramode
// second-order coherence <a'_m a'_m a_m a_m> / nbar_m^2 that controls the
// bound orderings.
struct MultimodeMoments {
  double norm_sq = 0.0;     // squared normalization of the superposition
  double nbar_m = 0.0;      // <n_m> on any single mode
  double n2_m = 0.0;        // <n_m^2>
  double g2_m = 0.0;        // intramode correlation
  double nbar_total = 0.0;  // sum over the d+1 modes
  // Variant closed form of g2 circulating for the squeezed families that
  // applies the normalization only to the leading term. Kept for
  // arbitration; deviates from the direct-summation value.
  double g2_closed_alt = 0.0;
  double g2_alt_rel_dev = 0.0;
};

namespace detail {

inline double g2_closed_alt_eval(const ProbeSpec& p, double norm_sq, double nbar_m) {
  switch (p.kind) {
    case ProbeKind::mnoons:
      return (double(p.noon_n) - 1.0) / nbar_m;
    case ProbeKind::mecs:
      return 1.0 / norm_sq;
    case ProbeKind::mesvs: {
      const double ch = std::cosh(p.r1);
      const double num = norm_sq * (3.0 * std::cosh(2.0 * p.r1) - 7.0) * ch * ch + 4.0;
      return num / (2.0 * nbar_m * nbar_m);
    }
    case ProbeKind::mescs: {
      const double b2 = p.beta * p.beta;
      const double z1 = b2 * std::sinh(2.0 * p.r2) +
                        (2.0 * b2 - 1.0) * std::cosh(2.0 * p.r2);
      const double z2 = 0.375 * std::cosh(4.0 * p.r2) + b2 * b2 - 2.0 * b2 - 1.375;
      return (norm_sq * (z1 + z2) + 2.0) / (nbar_m * nbar_m);
    }
  }
  std::abort();
}

inline MultimodeMoments reduce_moments(const ProbeSpec& p, const SingleModeMoments& sm,
                                       double norm_sq) {
  MultimodeMoments mm;
  mm.norm_sq = norm_sq;
  mm.nbar_m = norm_sq * sm.n_mean;
  mm.n2_m = norm_sq * sm.n2_mean;
  mm.g2_m = (mm.n2_m - mm.nbar_m) / (mm.nbar_m * mm.nbar_m);
  mm.nbar_total = (double(p.d) + 1.0) * mm.nbar_m;
  mm.g2_closed_alt = g2_closed_alt_eval(p, norm_sq, mm.nbar_m);
  mm.g2_alt_rel_dev = std::abs(mm.g2_closed_alt - mm.g2_m) /
                      std::max(std::abs(mm.g2_m), 1e-300);
  return mm;
}

}  // namespace detail

inline MultimodeMoments multimode_moments(const ProbeSpec& p) {
  p.validate();
  return detail::reduce_moments(p, single_mode_moments_closed(p), normalization_sq(p));
}

// Total mean photon number over the d+1 modes: (d+1) nbar_m, which
// simplifies to <n>_psi / (1 + d |<psi|0>|^2).
inline double total_mean_photons(const ProbeSpec& p) {
  p.validate();
  const SingleModeMoments sm = single_mode_moments_closed(p);
  return sm.n_mean / (1.0 + double(p.d) * sm.vac_overlap_sq);
}

// --- Fock-space oracle ------------------------------------------------------

inline int choose_cutoff(const ProbeSpec& p, double tol) {
  p.validate();
  switch (p.kind) {
    case ProbeKind::mnoons: return choose_cutoff_fock(p.noon_n);
    case ProbeKind::mecs: return choose_cutoff_coherent(p.alpha, tol);
    case ProbeKind::mesvs: return choose_cutoff_squeezed_vacuum(p.r1, tol);
    case ProbeKind::mescs:
      return choose_cutoff_squeezed_coherent(p.beta, p.r2, tol);
  }
  std::abort();
}

inline FockVector build_single_mode_at_cutoff(const ProbeSpec& p, int cutoff) {
  // lenient tolerance: fixtures deliberately work with truncated states
  switch (p.kind) {
    case ProbeKind::mnoons: return make_fock(p.noon_n, cutoff);
    case ProbeKind::mecs: return make_coherent(p.alpha, cutoff, 1.0);
    case ProbeKind::mesvs: return make_squeezed_vacuum(p.r1, cutoff, 1.0);
    case ProbeKind::mescs:
      return make_squeezed_coherent(p.beta, p.r2, cutoff, 1.0);
  }
  std::abort();
}

inline FockVector build_single_mode(const ProbeSpec& p, double tol) {
  const int k = choose_cutoff(p, tol);
  switch (p.kind) {
    case ProbeKind::mnoons: return make_fock(p.noon_n, k);
    case ProbeKind::mecs: return make_coherent(p.alpha, k, tol);
    case ProbeKind::mesvs: return make_squeezed_vacuum(p.r1, k, tol);
    case ProbeKind::mescs: return make_squeezed_coherent(p.beta, p.r2, k, tol);
  }
  std::abort();
}

// Brute-force arbitration path: truncated-Fock moments plus the generic
// normalization evaluated with the summed vacuum overlap. Everything the
// closed forms claim is checked against this.
inline MultimodeMoments multimode_moments_oracle(const ProbeSpec& p, double tol) {
  if (!(tol >= 1e-14)) {
    throw InvalidParameterError("oracle tolerance must be >= 1e-14");
  }
  p.validate();
  const FockVector psi = build_single_mode(p, tol);
  const SingleModeMoments sm = moments(psi);
  const double norm_sq = normalization_sq_generic(p.d, sm.vac_overlap_sq);
  return detail::reduce_moments(p, sm, norm_sq);
}

// --- parameter inversion ----------------------------------------------------

// How to pick the two MESCS parameters for a one-dimensional sweep target.
struct MescsConstraint {
  enum class Mode { equal_split, fixed_r2, fixed_beta };
  Mode mode = Mode::equal_split;
  double value = 0.0;

  static MescsConstraint equal_split() { return {}; }
  static MescsConstraint fixed_r2(double r2) {
    if (r2 < 0.0) throw InvalidParameterError("fixed r2 must be >= 0");
    return {Mode::fixed_r2, r2};
  }
  static MescsConstraint fixed_beta(double beta) {
    if (beta < 0.0) throw InvalidParameterError("fixed beta must be >= 0");
    return {Mode::fixed_beta, beta};
  }
};

namespace detail {

inline double mecs_total(double alpha, int d) {
  const double a2 = alpha * alpha;
  return a2 / (1.0 + double(d) * std::exp(-a2));
}

inline double mesvs_total(double r, int d) {
  const double s2 = std::sinh(r) * std::sinh(r);
  return s2 / (1.0 + double(d) / std::cosh(r));
}

inline double mescs_total(double beta, double r, int d) {
  const double p = beta * beta + std::sinh(r) * std::sinh(r);
  const double v = std::exp(-beta * beta * (1.0 - std::tanh(r))) / std::cosh(r);
  return p / (1.0 + double(d) * v);
}

// Bisection on a bracket already known to straddle the target; works for
// either orientation. 200-iteration cap, 1e-12 residual target.
template <class F>
double solve_bracketed(F&& f, double lo, double hi, double flo, double target) {
  const double resid = 1e-12 * std::max(1.0, std::abs(target));
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm - target) <= resid) return mid;
    if ((flo <= target) == (fm <= target)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(mid))) {
      return mid;
    }
  }
  return mid;
}

// Monotone-increasing map: grow the bracket geometrically, then bisect.
template <class F>
double solve_increasing(F&& f, double lo, double hi_seed, double hi_ceiling,
                        double target) {
  double flo = f(lo);
  if (flo > target) {
    throw InfeasibleTargetError("target below the attainable floor");
  }
  double hi = hi_seed;
  while (f(hi) < target) {
    lo = hi;
    flo = f(lo);
    hi *= 2.0;
    if (hi > hi_ceiling) {
      throw InfeasibleTargetError("no bracket below the parameter ceiling");
    }
  }
  return solve_bracketed(f, lo, hi, flo, target);
}

}  // namespace detail

// Invert parameter -> total mean photon number for a requested target.
// MNOONS targets must be positive integers (there is no state in between).
inline ProbeSpec solve_params_for_nbar(
    ProbeKind kind, double nbar_target, int d,
    MescsConstraint constraint = MescsConstraint::equal_split()) {
  if (!(nbar_target > 0.0)) {
    throw InvalidParameterError("target mean photon number must be > 0");
  }
  if (d < 1) throw InvalidParameterError("probe needs d >= 1");
  switch (kind) {
    case ProbeKind::mnoons: {
      const double nr = std::round(nbar_target);
      if (std::abs(nbar_target - nr) > 1e-9 || nr < 1.0) {
        throw NotRepresentableError(
            "MNOONS mean photon number must be a positive integer");
      }
      return ProbeSpec::mnoons(int(nr), d);
    }
    case ProbeKind::mecs: {
      const double a = detail::solve_increasing(
          [d](double x) { return detail::mecs_total(x, d); }, 0.0,
          std::max(1.0, std::sqrt(nbar_target)), 1e4, nbar_target);
      return ProbeSpec::mecs(a, d);
    }
    case ProbeKind::mesvs: {
      const double r = detail::solve_increasing(
          [d](double x) { return detail::mesvs_total(x, d); }, 0.0, 1.0, 60.0,
          nbar_target);
      return ProbeSpec::mesvs(r, d);
    }
    case ProbeKind::mescs:
      break;
  }
  // MESCS: one scalar left free by the constraint
  switch (constraint.mode) {
    case MescsConstraint::Mode::equal_split: {
      // photons split evenly: beta^2 = sinh^2 r2
      const double r = detail::solve_increasing(
          [d](double x) { return detail::mescs_total(std::sinh(x), x, d); }, 0.0,
          1.0, 60.0, nbar_target);
      return ProbeSpec::mescs(std::sinh(r), r, d);
    }
    case MescsConstraint::Mode::fixed_r2: {
      const double r2 = constraint.value;
      const double b = detail::solve_increasing(
          [d, r2](double x) { return detail::mescs_total(x, r2, d); }, 0.0,
          std::max(1.0, std::sqrt(nbar_target)), 1e4, nbar_target);
      return ProbeSpec::mescs(b, r2, d);
    }
    case MescsConstraint::Mode::fixed_beta: {
      // The map r2 -> nbar dips before it rises when beta > 0, so locate the
      // first straddling step on a coarse grid and bisect inside it.
      const double b = constraint.value;
      auto f = [d, b](double x) { return detail::mescs_total(b, x, d); };
      const double resid = 1e-12 * std::max(1.0, nbar_target);
      const double step = 0.05, rmax = 60.0;
      double prev_r = 0.0, prev_f = f(0.0);
      if (std::abs(prev_f - nbar_target) <= resid && b > 0.0) {
        return ProbeSpec::mescs(b, 0.0, d);
      }
      for (double r = step; r <= rmax; r += step) {
        const double fr = f(r);
        if ((prev_f - nbar_target) * (fr - nbar_target) <= 0.0) {
          const double sol =
              detail::solve_bracketed(f, prev_r, r, prev_f, nbar_target);
          return ProbeSpec::mescs(b, sol, d);
        }
        prev_r = r;
        prev_f = fr;
      }
      throw InfeasibleTargetError("fixed-beta target not reachable below r2 = 60");
    }
  }
  std::abort();
}

}  // namespace oamq
