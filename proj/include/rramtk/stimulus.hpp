#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace rramtk {

/// One piecewise-constant slice of a voltage schedule.
struct Segment {
  double voltage = 0;   // V
  double duration = 0;  // s, > 0
};

/// How a marked segment is sampled. Reads sample at the peak segment of a
/// rendered triangular read-out.
enum class SamplePolicy { at_peak };

struct ReadMark {
  std::size_t segment_index = 0;
  SamplePolicy policy = SamplePolicy::at_peak;
};

/// Piecewise-constant voltage schedule with read-out markers.
struct Waveform {
  std::vector<Segment> segments;
  std::vector<ReadMark> read_marks;

  /// Compensated (Neumaier) sum of the segment durations.
  double total_duration() const;

  /// Appends another waveform, remapping its read marks.
  void append(const Waveform& other);

  void validate() const;
};

/// n program pulses of the given amplitude and width, separated by zero-volt
/// gaps (omitted when gap == 0).
Waveform pulse_train(std::size_t n, double amp, double width, double gap);

/// Triangular read ramp 0 -> v_read -> 0 over t_read, rendered as
/// piecewise-constant steps of width t_s (midpoint voltage per step) with one
/// read mark on the first peak-voltage step. Midpoint rendering keeps every
/// step strictly below v_read, so a read never disturbs state when
/// v_read <= v_guard.
Waveform read_event(double v_read, double t_read, double t_s);

enum class CharacterizationMode { pulse_count, pulse_width, amplitude };

/// Parameters of the three pulse-programming characterization routines.
/// One series is produced per swept value; every program pulse is followed
/// by a read event so a per-pulse RS trajectory can be extracted.
struct CharacterizationPlan {
  CharacterizationMode mode = CharacterizationMode::pulse_count;
  std::vector<double> v_bias;       // V; swept in pulse_count / amplitude modes
  std::vector<double> width;        // s; swept in pulse_width mode (t_w,dR)
  std::size_t n_pulses = 1;
  double v_read = 0.5;              // V
  double t_read = 1e-3;             // s
  double period = 0;                // s; t_w,iv per series. 0 = width + t_read
  double t_s = 1e-6;                // s; read-ramp rendering step

  void validate() const;
};

struct CharacterizationSeries {
  std::string label;   // e.g. "0.8V" or "100us"
  double v_bias = 0;
  double width = 0;
  double period = 0;   // t_w,iv actually used
  Waveform waveform;
};

/// Expands a plan into its per-series waveforms. Each series should be
/// simulated from the same initial state. Throws when the requested period is
/// shorter than pulse width + read duration.
std::vector<CharacterizationSeries> build_characterization(const CharacterizationPlan& plan);

/// floor(duration/t_s) full steps plus one remainder step. Durations within
/// 1e-9 relative of an exact multiple snap to it and carry no remainder.
struct StepSplit {
  std::size_t n_full = 0;
  double remainder = 0;  // 0 when the duration divides exactly
};
StepSplit split_duration(double duration, double t_s);

/// Splits every segment into floor(duration/t_s) steps of t_s plus one
/// remainder step; total duration is preserved exactly under compensated
/// summation and read marks follow their segments.
Waveform discretize(const Waveform& w, double t_s);

/// Two-column text form: `voltage_V,duration_s` lines; a `#read` line marks
/// the preceding segment as a read sample point.
std::string to_text(const Waveform& w);
Waveform waveform_from_text(std::istream& in);
Waveform waveform_from_text(const std::string& text);

}  // namespace rramtk
