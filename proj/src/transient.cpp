#include "rramtk/transient.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "rramtk/csvio.hpp"

namespace rramtk {

Trace run_device(const ModelParams& p, const DeviceState& s0, const Waveform& w,
                 double t_s, const TraceOptions& opts) {
  if (!(t_s > 0)) throw std::invalid_argument("run_device: t_s must be > 0");
  s0.validate();
  w.validate();

  // Marked segments, sorted; each consumes one read event in order.
  std::vector<std::size_t> marked;
  marked.reserve(w.read_marks.size());
  for (const auto& m : w.read_marks) marked.push_back(m.segment_index);
  std::sort(marked.begin(), marked.end());

  Trace tr;
  double r = s0.r;
  double t = 0;
  std::size_t row_count = 0;
  std::size_t next_mark = 0;
  std::size_t read_counter = 0;

  for (std::size_t si = 0; si < w.segments.size(); ++si) {
    const auto& seg = w.segments[si];

    if (next_mark < marked.size() && marked[next_mark] == si) {
      // Sample at segment start, before the state moves.
      const double i_read = current(p, r, seg.voltage);
      tr.reads.push_back({read_counter, iv_invert(p, seg.voltage, i_read)});
      ++read_counter;
      ++next_mark;
      while (next_mark < marked.size() && marked[next_mark] == si) ++next_mark;  // dedupe
    }

    // Split the segment at t_s; the closed-form update makes the result
    // independent of the split, so only trace density changes.
    const StepSplit split = split_duration(seg.duration, t_s);
    const std::size_t n_steps = split.n_full + (split.remainder > 0 ? 1 : 0);
    for (std::size_t k = 0; k < n_steps; ++k) {
      const double dt = k < split.n_full ? t_s : split.remainder;
      if (opts.dense && (row_count % std::max<std::size_t>(opts.decimate, 1)) == 0)
        tr.rows.push_back({t, seg.voltage, current(p, r, seg.voltage), r});
      ++row_count;
      r = analytical_step(p, r, seg.voltage, dt);
      if (r < s0.r_floor) r = s0.r_floor;
      if (r > s0.r_ceil) r = s0.r_ceil;
      t += dt;
    }
  }

  tr.final_r = r;
  return tr;
}

std::vector<std::pair<std::size_t, double>> extract_rs_series(const Trace& tr) {
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(tr.reads.size());
  for (const auto& rd : tr.reads) out.emplace_back(rd.event_index, rd.rs_estimate);
  return out;
}

void write_trace_csv(std::ostream& out, const Trace& tr) {
  out << "t_s,v_V,i_A,R_ohm\n";
  for (const auto& row : tr.rows)
    out << format_double(row.t) << ',' << format_double(row.v) << ','
        << format_double(row.i) << ',' << format_double(row.r) << '\n';
}

void write_reads_csv(std::ostream& out, const Trace& tr) {
  out << "pulse_index,RS_ohm\n";
  for (const auto& rd : tr.reads)
    out << rd.event_index << ',' << format_double(rd.rs_estimate) << '\n';
}

Trace trace_from_csv(std::istream& in) {
  Trace tr;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("trace csv: empty input");
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4) throw std::invalid_argument("trace csv: expected 4 fields");
    tr.rows.push_back({parse_double(fields[0]), parse_double(fields[1]),
                       parse_double(fields[2]), parse_double(fields[3])});
  }
  if (!tr.rows.empty()) tr.final_r = tr.rows.back().r;
  return tr;
}

}  // namespace rramtk
