#include "rramtk/mosfet.hpp"

#include <cmath>
#include <stdexcept>

namespace rramtk {

void MosfetParams::validate() const {
  if (!(k_gain > 0)) throw std::invalid_argument("MosfetParams: k_gain must be > 0");
  if (!symmetric && v_th_rev < v_th)
    throw std::invalid_argument("MosfetParams: v_th_rev must be >= v_th");
  if (lambda < 0) throw std::invalid_argument("MosfetParams: lambda must be >= 0");
  if (!(ratings.v_gs_max > 0 && ratings.v_ds_max > 0 && ratings.v_gd_max > 0 &&
        ratings.v_db_max > 0))
    throw std::invalid_argument("MosfetParams: ratings must be > 0");
}

namespace {

// nMOS square law in the forward role (v_d >= v_s). (1 + lambda*v_ds) is kept
// on both branches so the law stays continuous at the triode/saturation edge.
FetEval nmos_forward(double k, double v_th, double lambda, double v_gs, double v_ds) {
  FetEval e;
  const double ov = v_gs - v_th;
  if (ov <= 0) return e;
  const double clm = 1.0 + lambda * v_ds;
  if (v_ds < ov) {
    const double core = 2.0 * ov * v_ds - v_ds * v_ds;
    e.i_d = k * core * clm;
    e.di_dvg = k * 2.0 * v_ds * clm;
    // d/dv_ds of core*clm, then chain onto v_s / v_d below
    const double dcore = 2.0 * ov - 2.0 * v_ds;
    const double d_vds = k * (dcore * clm + core * lambda);
    e.di_dvd = d_vds;
    e.di_dvs = -d_vds - e.di_dvg;  // v_gs and v_ds both depend on v_s
  } else {
    e.i_d = k * ov * ov * clm;
    e.di_dvg = k * 2.0 * ov * clm;
    const double d_vds = k * ov * ov * lambda;
    e.di_dvd = d_vds;
    e.di_dvs = -d_vds - e.di_dvg;
  }
  return e;
}

// nMOS for any terminal ordering: swaps roles when v_d < v_s and applies the
// reversed threshold.
FetEval nmos_eval(const MosfetParams& m, double v_g, double v_s, double v_d) {
  const double vth_rev = m.symmetric ? m.v_th : m.v_th_rev;
  if (v_d >= v_s) return nmos_forward(m.k_gain, m.v_th, m.lambda, v_g - v_s, v_d - v_s);
  // reversed: the nominal drain acts as source; current exits the drain
  FetEval r = nmos_forward(m.k_gain, vth_rev, m.lambda, v_g - v_d, v_s - v_d);
  FetEval e;
  e.i_d = -r.i_d;
  e.di_dvg = -r.di_dvg;
  e.di_dvs = -r.di_dvd;  // the roles of s and d are exchanged
  e.di_dvd = -r.di_dvs;
  return e;
}

}  // namespace

FetEval mosfet_eval(const MosfetParams& m, double v_g, double v_s, double v_d) {
  if (m.polarity == FetPolarity::nmos) return nmos_eval(m, v_g, v_s, v_d);
  // pMOS by sign reflection: i_p(vg,vs,vd) = -i_n(-vg,-vs,-vd)
  const FetEval r = nmos_eval(m, -v_g, -v_s, -v_d);
  FetEval e;
  e.i_d = -r.i_d;
  e.di_dvg = r.di_dvg;
  e.di_dvs = r.di_dvs;
  e.di_dvd = r.di_dvd;
  return e;
}

double mosfet_current(const MosfetParams& m, double v_g, double v_s, double v_d) {
  return mosfet_eval(m, v_g, v_s, v_d).i_d;
}

const char* terminal_pair_name(TerminalPair pair) {
  switch (pair) {
    case TerminalPair::GS: return "GS";
    case TerminalPair::GD: return "GD";
    case TerminalPair::DS: return "DS";
    case TerminalPair::DB: return "DB";
  }
  return "?";
}

std::vector<SoacViolation> soac_check(const std::vector<FetOperatingPoint>& points,
                                      const std::vector<MosfetParams>& fets) {
  if (points.size() != fets.size())
    throw std::invalid_argument("soac_check: one parameter set per operating point");
  std::vector<SoacViolation> out;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& op = points[k];
    const auto& r = fets[k].ratings;
    const auto probe = [&](TerminalPair pair, double a, double b, double rating) {
      const double mag = std::abs(a - b);
      if (mag > rating) out.push_back({op.device, pair, mag, rating});
    };
    probe(TerminalPair::GS, op.v_g, op.v_s, r.v_gs_max);
    probe(TerminalPair::GD, op.v_g, op.v_d, r.v_gd_max);
    probe(TerminalPair::DS, op.v_d, op.v_s, r.v_ds_max);
    probe(TerminalPair::DB, op.v_d, op.v_b, r.v_db_max);
  }
  return out;
}

}  // namespace rramtk
