#pragma once

// Explicit three-mode tensor construction of the NOON-like superposition
// (d = 2). Exponential in the mode count, so it only exists to arbitrate
// the single-mode reduction rules and the commutator saturation condition
// on a small cutoff. Not a production path.

#include <cstddef>
#include <vector>

#include "oamq/errors.hpp"
#include "oamq/fock.hpp"

namespace oamq {

class ThreeModeFixture {
 public:
  // |Psi> ~ |psi,0,0> + |0,psi,0> + |0,0,psi>, normalized numerically.
  explicit ThreeModeFixture(const FockVector& psi) : k_(psi.cutoff) {
    const std::size_t s = std::size_t(k_) + 1;
    amp_.assign(s * s * s, 0.0);
    for (int n = 0; n <= k_; ++n) {
      const double c = psi.coeffs[std::size_t(n)];
      amp_[idx(n, 0, 0)] += c;
      amp_[idx(0, n, 0)] += c;
      amp_[idx(0, 0, n)] += c;
    }
    double nrm = 0.0;
    for (double a : amp_) nrm += a * a;
    norm_ = std::sqrt(nrm);
    for (double& a : amp_) a /= norm_;
  }

  int modes() const { return 3; }
  int cutoff() const { return k_; }

  // <n_m>
  double mode_n(int m) const { return expect([m](int i, int j, int k) {
    return double(occ(m, i, j, k));
  }); }

  // <n_m^2>
  double mode_n2(int m) const { return expect([m](int i, int j, int k) {
    const double n = double(occ(m, i, j, k));
    return n * n;
  }); }

  // <a'_m a'_m a_m a_m> = <n_m (n_m - 1)>
  double mode_a2dag_a2(int m) const { return expect([m](int i, int j, int k) {
    const double n = double(occ(m, i, j, k));
    return n * (n - 1.0);
  }); }

  // <n_j n_m>, j != m; vanishes for this superposition
  double cross_nn(int j, int m) const { return expect([j, m](int a, int b, int c) {
    return double(occ(j, a, b, c)) * double(occ(m, a, b, c));
  }); }

  // <[n_j, n_m]> evaluated through two explicit operator applications.
  double commutator_nn(int j, int m) const {
    double jm = 0.0, mj = 0.0;
    for (int a = 0; a <= k_; ++a) {
      for (int b = 0; b <= k_; ++b) {
        for (int c = 0; c <= k_; ++c) {
          const double p = amp_[idx(a, b, c)] * amp_[idx(a, b, c)];
          jm += p * (double(occ(j, a, b, c)) * double(occ(m, a, b, c)));
          mj += p * (double(occ(m, a, b, c)) * double(occ(j, a, b, c)));
        }
      }
    }
    return jm - mj;
  }

 private:
  template <class W>
  double expect(W&& weight) const {
    detail::CompensatedSum acc;
    for (int a = 0; a <= k_; ++a) {
      for (int b = 0; b <= k_; ++b) {
        for (int c = 0; c <= k_; ++c) {
          const double amp = amp_[idx(a, b, c)];
          acc.add(amp * amp * weight(a, b, c));
        }
      }
    }
    return acc.value();
  }

  static int occ(int mode, int i, int j, int k) {
    return mode == 0 ? i : (mode == 1 ? j : k);
  }

  std::size_t idx(int i, int j, int k) const {
    const std::size_t s = std::size_t(k_) + 1;
    return (std::size_t(i) * s + std::size_t(j)) * s + std::size_t(k);
  }

  int k_;
  double norm_;
  std::vector<double> amp_;
};

}  // namespace oamq
