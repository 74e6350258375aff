#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "rramtk/model.hpp"
#include "rramtk/stimulus.hpp"

namespace rramtk {

struct TraceRow {
  double t = 0;  // s, step start
  double v = 0;  // V across the device during the step
  double i = 0;  // A at step start (pre-update state)
  double r = 0;  // ohm at step start
};

struct ReadSample {
  std::size_t event_index = 0;  // 0-based read event counter
  double rs_estimate = 0;       // ohm
};

/// Dense time series plus the read-out samples of one transient run.
struct Trace {
  std::vector<TraceRow> rows;
  std::vector<ReadSample> reads;
  double final_r = 0;
};

struct TraceOptions {
  bool dense = true;        ///< record every step; reads are always recorded
  std::size_t decimate = 1; ///< keep every Nth row when dense
};

/// Applies a waveform to one device at fixed timestep t_s. Per step the
/// current is sampled at the step start, then the state advances with the
/// closed-form update for the step's constant voltage. The state is kept
/// inside [r_floor, r_ceil]. Read marks yield RS estimates via the model IV
/// inverted at the sampled bias.
Trace run_device(const ModelParams& p, const DeviceState& s0, const Waveform& w,
                 double t_s, const TraceOptions& opts = {});

/// One (pulse index, RS) pair per read event, order preserved. Empty when the
/// trace holds no reads.
std::vector<std::pair<std::size_t, double>> extract_rs_series(const Trace& tr);

/// CSV with header `t_s,v_V,i_A,R_ohm`, shortest round-trip formatting.
void write_trace_csv(std::ostream& out, const Trace& tr);
/// CSV with header `pulse_index,RS_ohm`.
void write_reads_csv(std::ostream& out, const Trace& tr);

Trace trace_from_csv(std::istream& in);

}  // namespace rramtk
