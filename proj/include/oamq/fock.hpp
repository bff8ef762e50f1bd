#pragma once

// Truncated single-mode Fock-space states with analytically bounded tails.
//
// Every state family supported here (Fock, coherent, squeezed vacuum,
// squeezed coherent) has real parameters, hence real Fock amplitudes.
// Coefficients are generated by stable ratio recurrences rather than
// factorial evaluation so that cutoffs in the thousands stay accurate.
// These states serve as the brute-force arbiter for every closed-form
// photon-number moment used elsewhere in the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "oamq/errors.hpp"

namespace oamq {

// Hard cutoff ceiling: above this the tolerance is declared unreachable
// instead of silently degrading.
inline constexpr int kCutoffCeiling = 4096;

// Truncated single-mode pure state |psi> = sum_n c_n |n>, n = 0..cutoff.
struct FockVector {
  int cutoff = 0;              // highest retained Fock index K
  std::vector<double> coeffs;  // c_0 .. c_K
  double tail_mass = 0.0;      // upper bound on the discarded probability

  int size() const { return cutoff + 1; }
};

// Photon-number statistics of a single mode.
struct SingleModeMoments {
  double n_mean = 0.0;          // <n>
  double n2_mean = 0.0;         // <n^2>
  double a2dag_a2 = 0.0;        // <a'^2 a^2> = sum n(n-1)|c_n|^2
  double vac_overlap_sq = 0.0;  // |<0|psi>|^2
};

namespace detail {

// Neumaier compensated accumulator. The squeezed-family tails are long and
// slowly decaying, so plain summation loses digits against the 1e-10-level
// agreement targets.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double poisson_log_pmf(double lambda, int n) {
  return -lambda + n * std::log(lambda) - std::lgamma(double(n) + 1.0);
}

// Upper bound on sum_{n>K} e^-L L^n/n!  (geometric ratio bound).
inline double poisson_mass_tail_bound(double lambda, int cutoff) {
  if (lambda == 0.0) return 0.0;
  const double rho = lambda / (double(cutoff) + 2.0);
  if (rho >= 1.0) return std::numeric_limits<double>::infinity();
  const double head = std::exp(poisson_log_pmf(lambda, cutoff + 1));
  return head / (1.0 - rho);
}

// Upper bound on sum_{n>K} n^2 e^-L L^n/n!. Bounding the n^2-weighted tail
// (not just the mass) is what keeps the reported moments stable under
// cutoff doubling.
inline double poisson_weighted_tail_bound(double lambda, int cutoff) {
  if (lambda == 0.0) return 0.0;
  const double k1 = double(cutoff) + 1.0;
  const double rho = lambda * (k1 + 1.0) / (k1 * k1);
  if (rho >= 1.0) return std::numeric_limits<double>::infinity();
  const double head = k1 * k1 * std::exp(poisson_log_pmf(lambda, cutoff + 1));
  return head / (1.0 - rho);
}

}  // namespace detail

// |n> with c_n = 1. Exact: tail_mass = 0.
inline FockVector make_fock(int n, int cutoff) {
  if (n < 0) throw InvalidParameterError("Fock index must be >= 0");
  if (cutoff < 0) throw InvalidParameterError("cutoff must be >= 0");
  if (n > cutoff) {
    throw CutoffError("Fock index " + std::to_string(n) +
                      " exceeds cutoff " + std::to_string(cutoff));
  }
  FockVector st;
  st.cutoff = cutoff;
  st.coeffs.assign(std::size_t(cutoff) + 1, 0.0);
  st.coeffs[std::size_t(n)] = 1.0;
  st.tail_mass = 0.0;
  return st;
}

// Coherent state |alpha>, c_n = e^{-a^2/2} a^n / sqrt(n!), Poissonian tail.
inline FockVector make_coherent(double alpha, int cutoff, double tol = 1e-12) {
  if (alpha < 0.0) throw InvalidParameterError("coherent amplitude must be >= 0");
  if (cutoff < 0) throw InvalidParameterError("cutoff must be >= 0");
  const double lambda = alpha * alpha;
  const double tail = detail::poisson_mass_tail_bound(lambda, cutoff);
  if (!(tail <= tol)) {
    throw CutoffError("coherent tail bound " + std::to_string(tail) +
                      " above tolerance at cutoff " + std::to_string(cutoff));
  }
  FockVector st;
  st.cutoff = cutoff;
  st.coeffs.assign(std::size_t(cutoff) + 1, 0.0);
  double c = std::exp(-0.5 * lambda);
  for (int n = 0; n <= cutoff; ++n) {
    st.coeffs[std::size_t(n)] = c;
    c *= alpha / std::sqrt(double(n) + 1.0);
  }
  st.tail_mass = tail;
  return st;
}

// Squeezed vacuum |r> for S(r) = exp[r(a'^2 - a^2)/2], r >= 0, so <n> = sinh^2 r.
// Even amplitudes c_{2m} = sqrt((2m)!)/(2^m m!) tanh^m r / sqrt(cosh r),
// generated by the ratio recurrence c_{2m+2} = c_{2m} tanh(r) sqrt((2m+1)/(2m+2)).
inline FockVector make_squeezed_vacuum(double r, int cutoff, double tol = 1e-12) {
  if (r < 0.0) throw InvalidParameterError("squeezing parameter must be >= 0");
  if (cutoff < 0) throw InvalidParameterError("cutoff must be >= 0");
  const double t = std::tanh(r);
  FockVector st;
  st.cutoff = cutoff;
  st.coeffs.assign(std::size_t(cutoff) + 1, 0.0);
  double c = 1.0 / std::sqrt(std::cosh(r));
  int m2 = 0;  // even index 2m
  while (m2 <= cutoff) {
    st.coeffs[std::size_t(m2)] = c;
    c *= t * std::sqrt((double(m2) + 1.0) / (double(m2) + 2.0));
    m2 += 2;
  }
  // first discarded even amplitude now sits in c; geometric ratio tanh^2 r
  const double tail = (t == 0.0) ? 0.0 : (c * c) / (1.0 - t * t);
  if (!(tail <= tol)) {
    throw CutoffError("squeezed-vacuum tail bound above tolerance at cutoff " +
                      std::to_string(cutoff));
  }
  st.tail_mass = tail;
  return st;
}

// Squeezed coherent |beta, r> = D(beta) S(r) |0>. The ordering is fixed by
// the vacuum overlap |<0|beta,r>|^2 = e^{-beta^2 (1 - tanh r)} sech r.
// Coefficients follow from the eigenrelation
//   (a - tanh r a') |beta,r> = beta (1 - tanh r) |beta,r>,
// i.e. c_{n+1} = [beta(1-tanh r) c_n + tanh r sqrt(n) c_{n-1}] / sqrt(n+1).
inline FockVector make_squeezed_coherent(double beta, double r, int cutoff,
                                         double tol = 1e-12) {
  if (beta < 0.0) throw InvalidParameterError("displacement must be >= 0");
  if (r < 0.0) throw InvalidParameterError("squeezing parameter must be >= 0");
  if (cutoff < 0) throw InvalidParameterError("cutoff must be >= 0");
  const double t = std::tanh(r);
  const double drift = beta * (1.0 - t);
  FockVector st;
  st.cutoff = cutoff;
  st.coeffs.assign(std::size_t(cutoff) + 1, 0.0);
  st.coeffs[0] = std::sqrt(1.0 / std::cosh(r)) * std::exp(-0.5 * beta * beta * (1.0 - t));
  if (cutoff >= 1) st.coeffs[1] = drift * st.coeffs[0];
  for (int n = 1; n < cutoff; ++n) {
    st.coeffs[std::size_t(n) + 1] =
        (drift * st.coeffs[std::size_t(n)] +
         t * std::sqrt(double(n)) * st.coeffs[std::size_t(n) - 1]) /
        std::sqrt(double(n) + 1.0);
  }
  // The untruncated state is normalized, so the deficit of the retained
  // probability is exactly the discarded mass. Accumulate in long double:
  // the deficit has to be resolved far below the tolerance.
  long double norm = 0.0L;
  for (double ci : st.coeffs) norm += (long double)(ci) * (long double)(ci);
  const double deficit = double(std::max(0.0L, 1.0L - norm));
  if (norm > 1.0L + 1e-12L) {
    throw CutoffError("squeezed-coherent normalization drift above tolerance");
  }
  if (!(deficit <= tol)) {
    throw CutoffError("squeezed-coherent tail above tolerance at cutoff " +
                      std::to_string(cutoff));
  }
  st.tail_mass = deficit + 4.0 * std::numeric_limits<double>::epsilon();
  return st;
}

// Direct summation of the photon-number moments; the independent oracle for
// every closed form downstream.
inline SingleModeMoments moments(const FockVector& st) {
  detail::CompensatedSum s1, s2, sa;
  for (int n = 0; n <= st.cutoff; ++n) {
    const double p = st.coeffs[std::size_t(n)] * st.coeffs[std::size_t(n)];
    const double nd = double(n);
    s1.add(nd * p);
    s2.add(nd * nd * p);
    sa.add(nd * (nd - 1.0) * p);
  }
  SingleModeMoments m;
  m.n_mean = s1.value();
  m.n2_mean = s2.value();
  m.a2dag_a2 = sa.value();
  m.vac_overlap_sq = st.coeffs[0] * st.coeffs[0];
  return m;
}

// --- cutoff selection -------------------------------------------------------
//
// choose_cutoff_* return the smallest K whose analytic n^2-weighted tail
// bound is <= tol. Weighting by n^2 (instead of bare mass) guarantees that
// every reported moment moves by less than the tolerance when the cutoff is
// enlarged further, which is the convergence contract the tests rely on.

inline int choose_cutoff_fock(int n) {
  if (n < 0) throw InvalidParameterError("Fock index must be >= 0");
  if (n > kCutoffCeiling) {
    throw InfeasibleToleranceError("Fock index above the cutoff ceiling");
  }
  return n;
}

inline int choose_cutoff_coherent(double alpha, double tol) {
  if (!(tol > 0.0)) throw InvalidParameterError("tolerance must be > 0");
  if (alpha < 0.0) throw InvalidParameterError("coherent amplitude must be >= 0");
  const double lambda = alpha * alpha;
  for (int k = 0; k <= kCutoffCeiling; ++k) {
    if (detail::poisson_weighted_tail_bound(lambda, k) <= tol) return k;
  }
  throw InfeasibleToleranceError("coherent cutoff above ceiling for tol");
}

inline int choose_cutoff_squeezed_vacuum(double r, double tol) {
  if (!(tol > 0.0)) throw InvalidParameterError("tolerance must be > 0");
  if (r < 0.0) throw InvalidParameterError("squeezing parameter must be >= 0");
  if (r == 0.0) return 0;
  const double t2 = std::tanh(r) * std::tanh(r);
  double p = 1.0 / std::cosh(r);  // |c_0|^2
  for (int m2 = 0; m2 <= kCutoffCeiling; m2 += 2) {
    // weighted tail beyond cutoff K = m2 starts at even index m2 + 2
    const double p_next = p * t2 * (double(m2) + 1.0) / (double(m2) + 2.0);
    const double a_next = (double(m2) + 2.0) * (double(m2) + 2.0) * p_next;
    const double j = double(m2) + 2.0;  // ratio bound at the first tail term
    const double rho = t2 * (j + 2.0) * (j + 1.0) / (j * j);
    if (rho < 1.0 && a_next / (1.0 - rho) <= tol) return m2;
    p = p_next;
  }
  throw InfeasibleToleranceError("squeezed-vacuum cutoff above ceiling for tol");
}

// For the displaced squeezed family the exact second moment is known in
// closed form, so the weighted tail beyond K can be measured directly as
// <n^2> minus the retained partial sum (long double, compensated).
inline int choose_cutoff_squeezed_coherent(double beta, double r, double tol) {
  if (!(tol > 0.0)) throw InvalidParameterError("tolerance must be > 0");
  if (beta < 0.0 || r < 0.0) throw InvalidParameterError("parameters must be >= 0");
  if (r == 0.0) return choose_cutoff_coherent(beta, tol);
  if (beta == 0.0) return choose_cutoff_squeezed_vacuum(r, tol);
  const double t = std::tanh(r);
  const double drift = beta * (1.0 - t);
  const double s = std::sinh(r), c = std::cosh(r);
  const long double q_exact =
      (long double)((beta * beta + s * s)) * (beta * beta + s * s) +
      (long double)(beta * beta) * std::exp(2.0 * r) +
      2.0L * (long double)(c * c) * (s * s);

  std::vector<double> amp(std::size_t(kCutoffCeiling) + 1, 0.0);
  amp[0] = std::sqrt(1.0 / c) * std::exp(-0.5 * beta * beta * (1.0 - t));
  amp[1] = drift * amp[0];
  for (int n = 1; n < kCutoffCeiling; ++n) {
    amp[std::size_t(n) + 1] = (drift * amp[std::size_t(n)] +
                               t * std::sqrt(double(n)) * amp[std::size_t(n) - 1]) /
                              std::sqrt(double(n) + 1.0);
  }
  long double prefix_w = 0.0L;
  for (int n = 0; n <= kCutoffCeiling; ++n) {
    prefix_w += (long double)(double(n) * double(n)) * amp[std::size_t(n)] * amp[std::size_t(n)];
  }
  // residual beyond the probed range; noise floor a few 1e-16 at most
  long double tail_w = std::max(0.0L, q_exact - prefix_w);
  if (tail_w > tol) {
    throw InfeasibleToleranceError("squeezed-coherent cutoff above ceiling for tol");
  }
  for (int k = kCutoffCeiling; k >= 1; --k) {
    const long double term = (long double)(double(k) * double(k)) *
                             amp[std::size_t(k)] * amp[std::size_t(k)];
    if (tail_w + term > tol) return k;  // the tail beyond k-1 is already too big
    tail_w += term;
  }
  return 0;
}

}  // namespace oamq
