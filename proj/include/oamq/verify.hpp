#pragma once

// Formula-verification suite: every closed form in the library against its
// independent route (truncated-Fock oracle, dense inversion, scalar
// maximization, explicit Kraus sum). Failures become report entries, never
// aborts; one family is purely informational and documents the known
// deviation of the variant g2 closed forms for the squeezed families.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "oamq/loss.hpp"
#include "oamq/probe.hpp"
#include "oamq/qfim.hpp"

namespace oamq {

struct ToleranceProfile {
  double oracle_moments = 1e-9;
  double dense_trace = 1e-10;
  double qcrb_identity = 1e-12;
  double lossless = 1e-10;
  double delta_opt_pos = 1e-5;  // |delta| units
  double delta_opt_val = 1e-9;
  double kraus = 1e-12;

  static ToleranceProfile defaults() { return {}; }
  // One knob over all relative-deviation families; the positional delta
  // tolerance is left alone (it is bounded by the maximizer step size).
  static ToleranceProfile uniform(double t) {
    ToleranceProfile p;
    p.oracle_moments = t;
    p.dense_trace = t;
    p.qcrb_identity = t;
    p.lossless = t;
    p.delta_opt_val = t;
    p.kraus = t;
    return p;
  }
};

struct VerifyGrid {
  std::vector<ProbeKind> probes{kProbeOrder.begin(), kProbeOrder.end()};
  std::vector<double> nbars{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<int> ds{1, 5, 15};
  std::vector<int> dense_ds{1, 2, 5, 15, 50, 200};
  std::vector<int> lossless_ds{2, 5, 15};
  std::vector<double> etas{0.3, 0.5, 0.7, 0.9};
  std::vector<int> ls{1, 2};
  double nbar_eval = 5.0;
  double oracle_tol = 1e-12;

  static VerifyGrid defaults() { return {}; }
  static VerifyGrid empty() {
    VerifyGrid g;
    g.probes.clear();
    return g;
  }
};

struct CheckResult {
  std::string family;
  bool informational = false;
  bool pass = true;
  double worst_dev = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool all_passed() const {
    for (const CheckResult& c : checks) {
      if (!c.informational && !c.pass) return false;
    }
    return true;
  }
};

namespace detail {

inline double rel_dev(double a, double b) {
  const double den = std::max({std::abs(a), std::abs(b), 1e-30});
  return std::abs(a - b) / den;
}

struct WorstTracker {
  double dev = 0.0;
  std::string where;
  void update(double candidate, const std::string& loc) {
    if (candidate > dev) {
      dev = candidate;
      where = loc;
    }
  }
};

inline std::string loc(ProbeKind k, double nbar, int d) {
  return std::string(probe_name(k)) + " nbar=" + std::to_string(nbar) +
         " d=" + std::to_string(d);
}

}  // namespace detail

inline VerifyReport run_verification(const ToleranceProfile& tol = ToleranceProfile::defaults(),
                                     const VerifyGrid& grid = VerifyGrid::defaults()) {
  VerifyReport report;
  if (grid.probes.empty()) return report;

  // closed-form moments vs truncated-Fock oracle
  {
    detail::WorstTracker w;
    detail::WorstTracker alt;
    for (ProbeKind k : grid.probes) {
      for (double nbar : grid.nbars) {
        for (int d : grid.ds) {
          const ProbeSpec p = solve_params_for_nbar(k, nbar, d);
          const MultimodeMoments closed = multimode_moments(p);
          const MultimodeMoments oracle = multimode_moments_oracle(p, grid.oracle_tol);
          w.update(detail::rel_dev(closed.nbar_m, oracle.nbar_m),
                   detail::loc(k, nbar, d) + " (nbar_m)");
          w.update(detail::rel_dev(closed.g2_m, oracle.g2_m),
                   detail::loc(k, nbar, d) + " (g2)");
          if (k == ProbeKind::mesvs || k == ProbeKind::mescs) {
            alt.update(detail::rel_dev(closed.g2_closed_alt, oracle.g2_m),
                       detail::loc(k, nbar, d));
          }
        }
      }
    }
    report.checks.push_back({"oracle_vs_closed_form", false,
                             w.dev <= tol.oracle_moments, w.dev,
                             tol.oracle_moments, "worst at " + w.where});
    CheckResult a2{"a2_variant_report", true, true, alt.dev, 0.0,
                   "variant g2 closed form (normalization applied to the "
                   "leading term only); nonzero deviation expected for the "
                   "squeezed families; worst at " +
                       alt.where};
    report.checks.push_back(a2);
  }

  // Sherman-Morrison trace vs dense factorization, ideal and lossy matrices
  {
    detail::WorstTracker w;
    for (ProbeKind k : grid.probes) {
      for (int d : grid.dense_ds) {
        for (int l : grid.ls) {
          const ProbeSpec p = solve_params_for_nbar(k, grid.nbar_eval, d);
          const SensingConfig cfg{l, d};
          const StructuredQfim f = qfim(p, cfg);
          w.update(detail::rel_dev(
                       trace_inverse_structured(f),
                       trace_inverse_dense(dense_structured_matrix(f.a, f.b, d))),
                   detail::loc(k, grid.nbar_eval, d) + " l=" + std::to_string(l) +
                       " (ideal)");
          const LossConfig loss{0.7, delta_opt(p, 0.7)};
          const StructuredQfim cq = cq_structured(p, cfg, loss);
          w.update(detail::rel_dev(
                       cq_trace_inverse_exact(p, cfg, loss),
                       trace_inverse_dense(dense_structured_matrix(cq.a, cq.b, d))),
                   detail::loc(k, grid.nbar_eval, d) + " l=" + std::to_string(l) +
                       " (lossy)");
        }
      }
    }
    report.checks.push_back({"dense_vs_structured", false, w.dev <= tol.dense_trace,
                             w.dev, tol.dense_trace, "worst at " + w.where});
  }

  // the (nbar, g2) form of the bound vs the structured trace, plus the
  // per-family dispatch
  {
    detail::WorstTracker w;
    for (ProbeKind k : grid.probes) {
      for (double nbar : grid.nbars) {
        for (int d : grid.ds) {
          for (int l : grid.ls) {
            const ProbeSpec p = solve_params_for_nbar(k, nbar, d);
            const SensingConfig cfg{l, d};
            const double via_g2 = qcrb_ideal(p, cfg);
            const double via_trace = trace_inverse_structured(qfim(p, cfg));
            const double via_family = qcrb_ideal_per_state(p, cfg);
            w.update(detail::rel_dev(via_g2, via_trace),
                     detail::loc(k, nbar, d) + " (trace)");
            w.update(detail::rel_dev(via_g2, via_family),
                     detail::loc(k, nbar, d) + " (per-state)");
          }
        }
      }
    }
    report.checks.push_back({"qcrb_identity", false, w.dev <= tol.qcrb_identity,
                             w.dev, tol.qcrb_identity, "worst at " + w.where});
  }

  // eta = 1 must reproduce the ideal bound for any delta
  {
    detail::WorstTracker w;
    for (ProbeKind k : grid.probes) {
      for (int d : grid.lossless_ds) {
        const ProbeSpec p = solve_params_for_nbar(k, grid.nbar_eval, d);
        const SensingConfig cfg{2, d};
        const double ideal = qcrb_ideal(p, cfg);
        for (double dlt : {-1.0, -0.5, 0.0}) {
          const double lossy = cq_trace_inverse_exact(p, cfg, LossConfig{1.0, dlt});
          w.update(detail::rel_dev(ideal, lossy),
                   detail::loc(k, grid.nbar_eval, d) + " delta=" + std::to_string(dlt));
        }
      }
    }
    report.checks.push_back({"lossless_consistency", false, w.dev <= tol.lossless,
                             w.dev, tol.lossless, "worst at " + w.where});
  }

  // closed-form delta_opt vs scalar maximization of the large-d trace
  {
    detail::WorstTracker wpos, wval;
    double delta_min = 0.0, delta_max = 0.0;
    bool first = true;
    int outside_anchor = 0;
    for (ProbeKind k : grid.probes) {
      for (double eta : grid.etas) {
        const int d = 15;
        const ProbeSpec p = solve_params_for_nbar(k, grid.nbar_eval, d);
        const SensingConfig cfg{2, d};
        const double closed = delta_opt(p, eta);
        const DeltaArgmax num = argmax_delta_largeD(p, cfg, eta);
        wpos.update(std::abs(closed - num.delta),
                    detail::loc(k, grid.nbar_eval, d) + " eta=" + std::to_string(eta));
        wval.update(detail::rel_dev(
                        num.value, cq_trace_inverse_largeD(p, cfg, LossConfig{eta, closed})),
                    detail::loc(k, grid.nbar_eval, d) + " eta=" + std::to_string(eta));
        if (first || closed < delta_min) delta_min = closed;
        if (first || closed > delta_max) delta_max = closed;
        first = false;
        if (closed < -1.0 || closed > 0.0) ++outside_anchor;
      }
    }
    const bool pass = wpos.dev <= tol.delta_opt_pos && wval.dev <= tol.delta_opt_val;
    std::string detail_s = "worst |ddelta|=" + std::to_string(wpos.dev) + " at " +
                           wpos.where + "; delta_opt range [" +
                           std::to_string(delta_min) + ", " + std::to_string(delta_max) +
                           "]";
    if (outside_anchor > 0) {
      detail_s += "; " + std::to_string(outside_anchor) +
                  " points outside the physical anchor interval [-1, 0] "
                  "(reported, not clamped; search bracket grown as needed)";
    }
    report.checks.push_back(
        {"delta_opt_vs_argmax", false, pass, wval.dev, tol.delta_opt_val, detail_s});
  }

  // Kraus completeness on a truncated single mode
  {
    double worst = 0.0;
    for (double dlt : {-0.4, 0.0}) {
      worst = std::max(worst, kraus_completeness_defect(0.5, 4, 2, 0.37, dlt));
    }
    report.checks.push_back({"kraus_completeness", false, worst <= tol.kraus, worst,
                             tol.kraus,
                             "eta=0.5 cutoff=4, delta in {-0.4, 0}"});
  }

  return report;
}

inline nlohmann::json to_json(const VerifyReport& r) {
  nlohmann::json out;
  out["all_passed"] = r.all_passed();
  out["checks"] = nlohmann::json::array();
  for (const CheckResult& c : r.checks) {
    nlohmann::json j;
    j["family"] = c.family;
    j["informational"] = c.informational;
    j["pass"] = c.pass;
    j["worst_dev"] = c.worst_dev;
    j["tolerance"] = c.tolerance;
    j["detail"] = c.detail;
    out["checks"].push_back(j);
  }
  return out;
}

inline std::string to_text(const VerifyReport& r) {
  std::string out;
  for (const CheckResult& c : r.checks) {
    const char* tag = c.informational ? "INFO" : (c.pass ? "PASS" : "FAIL");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", c.worst_dev);
    out += std::string("[") + tag + "] " + c.family + " worst_dev=" + buf;
    if (!c.informational) {
      std::snprintf(buf, sizeof(buf), "%.1e", c.tolerance);
      out += std::string(" tol=") + buf;
    }
    out += " | " + c.detail + "\n";
  }
  out += r.all_passed() ? "verification: all families passed\n"
                        : "verification: FAILURES present\n";
  return out;
}

}  // namespace oamq
