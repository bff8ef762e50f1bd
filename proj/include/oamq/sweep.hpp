#pragma once

// Deterministic parameter sweeps and figure presets. Points are emitted
// axis-major, probe-minor (canonical probe order), each carrying a value or
// a per-point error code; a failed point never aborts the sweep. CSV output
// is byte-stable across runs: fixed header, 17 significant digits, '.'
// decimal separator.

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "oamq/errors.hpp"
#include "oamq/loss.hpp"
#include "oamq/probe.hpp"
#include "oamq/qfim.hpp"

namespace oamq {

enum class SweepAxis { nbar_total, d, l, eta };
enum class Quantity { ideal, lossy, robustness, g2 };

inline const char* axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::nbar_total: return "nbar_total";
    case SweepAxis::d: return "d";
    case SweepAxis::l: return "l";
    case SweepAxis::eta: return "eta";
  }
  return "?";
}

inline SweepAxis axis_from_name(const std::string& s) {
  if (s == "nbar_total" || s == "nbar") return SweepAxis::nbar_total;
  if (s == "d") return SweepAxis::d;
  if (s == "l") return SweepAxis::l;
  if (s == "eta") return SweepAxis::eta;
  throw InvalidParameterError("unknown sweep axis: " + s);
}

inline const char* quantity_name(Quantity q) {
  switch (q) {
    case Quantity::ideal: return "ideal";
    case Quantity::lossy: return "lossy";
    case Quantity::robustness: return "robustness";
    case Quantity::g2: return "g2";
  }
  return "?";
}

inline Quantity quantity_from_name(const std::string& s) {
  if (s == "ideal") return Quantity::ideal;
  if (s == "lossy") return Quantity::lossy;
  if (s == "robustness") return Quantity::robustness;
  if (s == "g2") return Quantity::g2;
  throw InvalidParameterError("unknown quantity: " + s);
}

inline MescsConstraint mescs_constraint_from_string(const std::string& s) {
  if (s == "equal_split") return MescsConstraint::equal_split();
  const auto colon = s.find(':');
  if (colon != std::string::npos) {
    const std::string head = s.substr(0, colon);
    const double v = std::stod(s.substr(colon + 1));
    if (head == "fixed_r2") return MescsConstraint::fixed_r2(v);
    if (head == "fixed_beta") return MescsConstraint::fixed_beta(v);
  }
  throw InvalidParameterError(
      "MESCS constraint must be equal_split, fixed_r2:<v> or fixed_beta:<v>");
}

struct SweepSpec {
  SweepAxis axis = SweepAxis::nbar_total;
  double start = 1.0;
  double stop = 10.0;
  int steps = 10;
  // fixed values; the one matching the axis is ignored
  double nbar = 5.0;
  int d = 15;
  int l = 2;
  double eta = 0.7;
  std::vector<ProbeKind> probes{kProbeOrder.begin(), kProbeOrder.end()};
  MescsConstraint mescs = MescsConstraint::equal_split();
  Quantity quantity = Quantity::ideal;
  std::optional<double> delta_override;  // bypasses delta_opt in lossy sweeps
  double tol = 1e-12;
};

struct CurvePoint {
  std::string axis;
  double axis_value = 0.0;
  ProbeKind probe = ProbeKind::mnoons;
  Quantity quantity = Quantity::ideal;
  double value = std::nan("");
  std::string error_code;  // empty on success
  std::map<std::string, double> diagnostics;
};

inline std::vector<double> axis_values(const SweepSpec& s) {
  if (s.steps < 1) throw InvalidParameterError("sweep needs steps >= 1");
  std::vector<double> vals;
  if (s.steps == 1) {
    if (s.start != s.stop) {
      throw InvalidParameterError("single-step sweep needs start == stop");
    }
    vals.push_back(s.start);
  } else {
    const double h = (s.stop - s.start) / double(s.steps - 1);
    for (int i = 0; i < s.steps; ++i) vals.push_back(s.start + h * double(i));
    vals.back() = s.stop;
  }
  if (s.axis == SweepAxis::d || s.axis == SweepAxis::l) {
    for (double& v : vals) {
      if (std::abs(v - std::round(v)) > 1e-9 || v < 1.0) {
        throw InvalidParameterError("integer axis requires positive integer steps");
      }
      v = std::round(v);
    }
  }
  if (s.axis == SweepAxis::eta) {
    for (double v : vals) {
      if (!(v > 0.0 && v <= 1.0)) {
        throw InvalidParameterError("eta axis must stay within (0, 1]");
      }
    }
  }
  return vals;
}

namespace detail {

inline void fill_error_code(CurvePoint& cp, const std::exception& e) {
  if (dynamic_cast<const NotRepresentableError*>(&e)) {
    cp.error_code = "not_representable";
  } else if (dynamic_cast<const InfeasibleTargetError*>(&e)) {
    cp.error_code = "infeasible_target";
  } else if (dynamic_cast<const InfeasibleToleranceError*>(&e)) {
    cp.error_code = "infeasible_tolerance";
  } else if (dynamic_cast<const CutoffError*>(&e)) {
    cp.error_code = "cutoff_too_small";
  } else if (dynamic_cast<const SingularMatrixError*>(&e)) {
    cp.error_code = "singular_matrix";
  } else if (dynamic_cast<const InvalidParameterError*>(&e)) {
    cp.error_code = "invalid_parameter";
  } else {
    cp.error_code = "error";
  }
}

inline CurvePoint eval_point(const SweepSpec& s, ProbeKind kind, double axis_value,
                             double nbar, int d, int l, double eta) {
  CurvePoint cp;
  cp.axis = axis_name(s.axis);
  cp.axis_value = axis_value;
  cp.probe = kind;
  cp.quantity = s.quantity;
  try {
    const ProbeSpec probe = solve_params_for_nbar(kind, nbar, d, s.mescs);
    const SensingConfig cfg{l, d};
    const MultimodeMoments mm = multimode_moments(probe);
    cp.diagnostics["norm_sq"] = mm.norm_sq;
    cp.diagnostics["nbar_m"] = mm.nbar_m;
    cp.diagnostics["g2"] = mm.g2_m;
    cp.diagnostics["g2_alt_rel_dev"] = mm.g2_alt_rel_dev;
    switch (s.quantity) {
      case Quantity::g2:
        cp.value = mm.g2_m;
        break;
      case Quantity::ideal: {
        const StructuredQfim f = qfim(probe, cfg);
        cp.diagnostics["qfim_a"] = f.a;
        cp.diagnostics["qfim_b"] = f.b;
        cp.value = qcrb_ideal(probe, cfg);
        break;
      }
      case Quantity::lossy: {
        const double dlt =
            s.delta_override ? *s.delta_override : delta_opt(probe, eta);
        cp.diagnostics["delta"] = dlt;
        cp.diagnostics["cq_exact"] =
            cq_trace_inverse_exact(probe, cfg, LossConfig{eta, dlt});
        cp.diagnostics["cq_largeD"] =
            cq_trace_inverse_largeD(probe, cfg, LossConfig{eta, dlt});
        cp.value = s.delta_override ? cp.diagnostics["cq_largeD"]
                                    : qcrb_lossy(probe, cfg, eta);
        break;
      }
      case Quantity::robustness: {
        cp.diagnostics["delta"] = delta_opt(probe, eta);
        cp.diagnostics["gap_exact"] = robustness_exact_gap(probe, cfg, eta);
        cp.diagnostics["qcrb_ideal"] = qcrb_ideal(probe, cfg);
        cp.value = robustness(probe, cfg, eta);
        break;
      }
    }
    const bool must_be_positive =
        s.quantity == Quantity::ideal || s.quantity == Quantity::lossy;
    if (!std::isfinite(cp.value)) {
      cp.error_code = "nonfinite_value";
      cp.value = std::nan("");
    } else if (must_be_positive && !(cp.value > 0.0)) {
      cp.error_code = "nonpositive_value";
    }
  } catch (const std::exception& e) {
    fill_error_code(cp, e);
    cp.value = std::nan("");
    cp.diagnostics.clear();
  }
  return cp;
}

inline std::string fmt_sci(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

inline std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace detail

inline std::vector<CurvePoint> run_sweep(const SweepSpec& s) {
  if (s.probes.empty()) throw InvalidParameterError("sweep needs at least one probe");
  const std::vector<double> vals = axis_values(s);
  std::vector<CurvePoint> out;
  out.reserve(vals.size() * s.probes.size());
  for (double v : vals) {
    double nbar = s.nbar;
    int d = s.d;
    int l = s.l;
    double eta = s.eta;
    switch (s.axis) {
      case SweepAxis::nbar_total: nbar = v; break;
      case SweepAxis::d: d = int(v); break;
      case SweepAxis::l: l = int(v); break;
      case SweepAxis::eta: eta = v; break;
    }
    for (ProbeKind k : kProbeOrder) {
      bool wanted = false;
      for (ProbeKind w : s.probes) wanted = wanted || (w == k);
      if (!wanted) continue;
      out.push_back(detail::eval_point(s, k, v, nbar, d, l, eta));
    }
  }
  return out;
}

// Presets named after the survey figures this library reproduces; each bakes
// in the fixed parameters of the corresponding curve set.
inline SweepSpec figure_preset(const std::string& id) {
  SweepSpec s;
  auto d_axis = [&](int lo, int hi) {
    s.axis = SweepAxis::d;
    s.start = lo;
    s.stop = hi;
    s.steps = hi - lo + 1;
  };
  auto l_axis = [&](int lo, int hi) {
    s.axis = SweepAxis::l;
    s.start = lo;
    s.stop = hi;
    s.steps = hi - lo + 1;
  };
  auto nbar_axis = [&] {
    s.axis = SweepAxis::nbar_total;
    s.start = 1.0;
    s.stop = 10.0;
    s.steps = 10;
  };
  if (id == "fig2a") {
    nbar_axis();
    s.d = 15;
    s.l = 2;
    s.quantity = Quantity::ideal;
  } else if (id == "fig2b") {
    nbar_axis();
    s.d = 15;
    s.l = 2;
    s.quantity = Quantity::g2;
  } else if (id == "fig3a") {
    d_axis(2, 30);
    s.nbar = 5.0;
    s.l = 2;
    s.quantity = Quantity::ideal;
  } else if (id == "fig3b") {
    l_axis(1, 10);
    s.nbar = 5.0;
    s.d = 15;
    s.quantity = Quantity::ideal;
  } else if (id == "fig5a") {
    s.axis = SweepAxis::eta;
    s.start = 0.05;  // the lossy bound diverges as eta -> 0
    s.stop = 1.0;
    s.steps = 20;
    s.nbar = 5.0;
    s.d = 15;
    s.l = 2;
    s.quantity = Quantity::lossy;
  } else if (id == "fig5b") {
    nbar_axis();
    s.d = 15;
    s.l = 2;
    s.eta = 0.7;
    s.quantity = Quantity::lossy;
  } else if (id == "fig6a") {
    d_axis(2, 30);
    s.nbar = 5.0;
    s.l = 2;
    s.eta = 0.7;
    s.quantity = Quantity::lossy;
  } else if (id == "fig6b") {
    l_axis(1, 10);
    s.nbar = 5.0;
    s.d = 15;
    s.eta = 0.7;
    s.quantity = Quantity::lossy;
  } else if (id == "fig7a") {
    d_axis(2, 30);
    s.nbar = 5.0;
    s.l = 2;
    s.eta = 0.7;
    s.quantity = Quantity::robustness;
  } else if (id == "fig7b") {
    l_axis(2, 10);
    s.nbar = 5.0;
    s.d = 10;
    s.eta = 0.7;
    s.quantity = Quantity::robustness;
  } else {
    throw InvalidParameterError("unknown figure preset: " + id);
  }
  return s;
}

inline std::vector<std::string> figure_preset_names() {
  return {"fig2a", "fig2b", "fig3a", "fig3b", "fig5a",
          "fig5b", "fig6a", "fig6b", "fig7a", "fig7b"};
}

inline nlohmann::json point_to_json(const CurvePoint& cp) {
  nlohmann::json j;
  j["axis"] = cp.axis;
  j["axis_value"] = cp.axis_value;
  j["probe"] = probe_name(cp.probe);
  j["quantity"] = quantity_name(cp.quantity);
  j["value"] = cp.value;  // NaN serializes as null
  j["error_code"] = cp.error_code;
  j["diagnostics"] = cp.diagnostics;
  return j;
}

inline std::string to_csv(const std::vector<CurvePoint>& pts) {
  std::string out =
      "axis_name,axis_value,probe,quantity,value,error_code,diagnostics_json\n";
  for (const CurvePoint& cp : pts) {
    nlohmann::json diag(cp.diagnostics);
    out += cp.axis;
    out += ',';
    out += detail::fmt_sci(cp.axis_value);
    out += ',';
    out += probe_name(cp.probe);
    out += ',';
    out += quantity_name(cp.quantity);
    out += ',';
    out += detail::fmt_sci(cp.value);
    out += ',';
    out += cp.error_code;
    out += ',';
    out += detail::csv_quote(diag.dump());
    out += '\n';
  }
  return out;
}

inline std::string to_jsonl(const std::vector<CurvePoint>& pts) {
  std::string out;
  for (const CurvePoint& cp : pts) {
    out += point_to_json(cp).dump();
    out += '\n';
  }
  return out;
}

}  // namespace oamq
