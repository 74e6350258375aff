#pragma once

#include <string>
#include <vector>

namespace rramtk {

enum class FetPolarity { nmos, pmos };

/// Terminal-pair voltage ratings for the safe-operating-area check.
struct FetRatings {
  double v_gs_max = 0;
  double v_ds_max = 0;
  double v_gd_max = 0;
  double v_db_max = 0;
};

/// Square-law MOSFET with an asymmetry hook: when the terminal voltages put
/// the device in reversed operation (nominal drain acting as source), the
/// elevated threshold v_th_rev applies, as seen on extended-drain devices.
struct MosfetParams {
  FetPolarity polarity = FetPolarity::nmos;
  double v_th = 0;       ///< forward threshold magnitude (V)
  double v_th_rev = 0;   ///< reversed-role threshold magnitude, >= v_th
  double k_gain = 0;     ///< A/V^2, transconductance folded with W/L
  double lambda = 0;     ///< 1/V channel-length modulation
  FetRatings ratings;
  bool symmetric = false;  ///< source/drain interchangeable; v_th_rev ignored

  void validate() const;
};

/// Drain current I_D: conventional current into the nominal drain terminal,
/// out of the nominal source. Negative values mean the device conducts in
/// the reversed role (current entering the nominal source), which is when
/// v_th_rev applies for asymmetric devices. pMOS devices are handled by sign
/// reflection.
double mosfet_current(const MosfetParams& m, double v_g, double v_s, double v_d);

/// Current plus analytic partial derivatives, for Newton stamps.
struct FetEval {
  double i_d = 0;
  double di_dvg = 0;
  double di_dvs = 0;
  double di_dvd = 0;
};
FetEval mosfet_eval(const MosfetParams& m, double v_g, double v_s, double v_d);

/// Solved terminal voltages of one FET instance.
struct FetOperatingPoint {
  std::string device;
  double v_g = 0, v_s = 0, v_d = 0, v_b = 0;
};

enum class TerminalPair { GS, GD, DS, DB };

const char* terminal_pair_name(TerminalPair pair);

struct SoacViolation {
  std::string device;
  TerminalPair pair = TerminalPair::GS;
  double value = 0;   ///< |terminal-pair voltage| found
  double rating = 0;  ///< the limit it exceeds
};

/// Compares every terminal-pair magnitude of every operating point against
/// the matching ratings entry; an empty result is a pass. Each violation is
/// listed exactly once.
std::vector<SoacViolation> soac_check(const std::vector<FetOperatingPoint>& points,
                                      const std::vector<MosfetParams>& fets);

}  // namespace rramtk
