#include "rramtk/stimulus.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "rramtk/csvio.hpp"

namespace rramtk {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

struct NeumaierSum {
  double sum = 0, comp = 0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

StepSplit split_duration(double duration, double t_s) {
  require(t_s > 0, "split_duration: t_s must be > 0");
  if (t_s >= duration) return {0, duration};
  StepSplit s;
  s.n_full = static_cast<std::size_t>(duration / t_s);
  s.remainder = duration - static_cast<double>(s.n_full) * t_s;
  if (s.remainder > (1.0 - 1e-9) * t_s) {  // within noise of the next multiple
    ++s.n_full;
    s.remainder = duration - static_cast<double>(s.n_full) * t_s;
  }
  if (s.remainder < 1e-9 * t_s) s.remainder = 0;  // exact multiple, up to noise
  return s;
}

double Waveform::total_duration() const {
  NeumaierSum acc;
  for (const auto& s : segments) acc.add(s.duration);
  return acc.value();
}

void Waveform::append(const Waveform& other) {
  const std::size_t offset = segments.size();
  segments.insert(segments.end(), other.segments.begin(), other.segments.end());
  for (const auto& m : other.read_marks)
    read_marks.push_back({m.segment_index + offset, m.policy});
}

void Waveform::validate() const {
  for (const auto& s : segments)
    require(s.duration > 0, "Waveform: segment durations must be > 0");
  for (const auto& m : read_marks)
    require(m.segment_index < segments.size(), "Waveform: read mark index out of range");
}

Waveform pulse_train(std::size_t n, double amp, double width, double gap) {
  require(n >= 1, "pulse_train: need at least one pulse");
  require(width > 0, "pulse_train: width must be > 0");
  require(gap >= 0, "pulse_train: gap must be >= 0");
  Waveform w;
  w.segments.reserve(gap > 0 ? 2 * n - 1 : n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && gap > 0) w.segments.push_back({0.0, gap});
    w.segments.push_back({amp, width});
  }
  return w;
}

Waveform read_event(double v_read, double t_read, double t_s) {
  require(v_read > 0, "read_event: v_read must be > 0");
  require(t_read > 0, "read_event: t_read must be > 0");
  require(t_s > 0, "read_event: t_s must be > 0");
  if (t_s > t_read) throw std::invalid_argument("read_event: t_s exceeds t_read");

  Waveform w;
  const auto tri = [&](double x) {
    const double half = 0.5 * t_read;
    return x <= half ? v_read * (x / half) : v_read * ((t_read - x) / half);
  };

  const StepSplit split = split_duration(t_read, t_s);
  double t0 = 0;
  for (std::size_t i = 0; i < split.n_full; ++i) {
    w.segments.push_back({tri(t0 + 0.5 * t_s), t_s});
    t0 += t_s;
  }
  if (split.remainder > 0)
    w.segments.push_back({tri(t0 + 0.5 * split.remainder), split.remainder});

  std::size_t peak = 0;
  for (std::size_t i = 1; i < w.segments.size(); ++i)
    if (w.segments[i].voltage > w.segments[peak].voltage) peak = i;
  w.read_marks.push_back({peak, SamplePolicy::at_peak});
  return w;
}

void CharacterizationPlan::validate() const {
  require(n_pulses >= 1, "plan: n_pulses must be >= 1");
  require(v_read > 0, "plan: v_read must be > 0");
  require(t_read > 0, "plan: t_read must be > 0");
  require(t_s > 0, "plan: t_s must be > 0");
  switch (mode) {
    case CharacterizationMode::pulse_count:
    case CharacterizationMode::amplitude:
      require(!v_bias.empty(), "plan: v_bias list must not be empty");
      require(width.size() == 1, "plan: exactly one width expected in this mode");
      break;
    case CharacterizationMode::pulse_width:
      require(v_bias.size() == 1, "plan: exactly one v_bias expected in pulse_width mode");
      require(!width.empty(), "plan: width list must not be empty");
      break;
  }
  for (double w : width) require(w > 0, "plan: widths must be > 0");
}

std::vector<CharacterizationSeries> build_characterization(const CharacterizationPlan& plan) {
  plan.validate();

  std::vector<std::pair<double, double>> combos;  // (v_bias, width)
  if (plan.mode == CharacterizationMode::pulse_width) {
    for (double w : plan.width) combos.emplace_back(plan.v_bias.front(), w);
  } else {
    for (double v : plan.v_bias) combos.emplace_back(v, plan.width.front());
  }

  std::vector<CharacterizationSeries> out;
  out.reserve(combos.size());
  for (auto [vb, width] : combos) {
    const double min_period = width + plan.t_read;
    double period = plan.period > 0 ? plan.period : min_period;
    if (period < min_period)
      throw std::invalid_argument("build_characterization: period shorter than pulse + read");
    const double gap = period - min_period;

    CharacterizationSeries series;
    series.v_bias = vb;
    series.width = width;
    series.period = period;
    series.label = plan.mode == CharacterizationMode::pulse_width
                       ? format_double(width) + "s"
                       : format_double(vb) + "V";

    const Waveform read = read_event(plan.v_read, plan.t_read, plan.t_s);
    for (std::size_t i = 0; i < plan.n_pulses; ++i) {
      series.waveform.segments.push_back({vb, width});
      series.waveform.append(read);
      if (gap > 0) series.waveform.segments.push_back({0.0, gap});
    }
    out.push_back(std::move(series));
  }
  return out;
}

Waveform discretize(const Waveform& w, double t_s) {
  require(t_s > 0, "discretize: t_s must be > 0");
  Waveform out;
  std::vector<std::size_t> first_index(w.segments.size());

  for (std::size_t i = 0; i < w.segments.size(); ++i) {
    const auto& seg = w.segments[i];
    first_index[i] = out.segments.size();
    if (t_s >= seg.duration) {
      out.segments.push_back(seg);
      continue;
    }
    const StepSplit split = split_duration(seg.duration, t_s);
    for (std::size_t k = 0; k < split.n_full; ++k)
      out.segments.push_back({seg.voltage, t_s});
    if (split.remainder > 0) out.segments.push_back({seg.voltage, split.remainder});
  }

  // Fold any compensated-sum residue into the last step so the total
  // duration is conserved exactly.
  for (int pass = 0; pass < 4 && !out.segments.empty(); ++pass) {
    const double deficit = w.total_duration() - out.total_duration();
    if (deficit == 0) break;
    out.segments.back().duration += deficit;
  }

  for (const auto& m : w.read_marks)
    out.read_marks.push_back({first_index[m.segment_index], m.policy});
  return out;
}

std::string to_text(const Waveform& w) {
  std::string out;
  std::vector<std::size_t> marks_at(w.segments.size(), 0);
  for (const auto& m : w.read_marks) ++marks_at[m.segment_index];
  for (std::size_t i = 0; i < w.segments.size(); ++i) {
    out += format_double(w.segments[i].voltage);
    out += ',';
    out += format_double(w.segments[i].duration);
    out += '\n';
    for (std::size_t k = 0; k < marks_at[i]; ++k) out += "#read\n";
  }
  return out;
}

Waveform waveform_from_text(std::istream& in) {
  Waveform w;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      if (line.compare(first, 5, "#read") == 0) {
        if (w.segments.empty())
          throw std::invalid_argument("waveform: #read before any segment");
        w.read_marks.push_back({w.segments.size() - 1, SamplePolicy::at_peak});
      }
      continue;  // other # lines are comments
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 2)
      throw std::invalid_argument("waveform: expected 'voltage_V,duration_s': " + line);
    w.segments.push_back({parse_double(fields[0]), parse_double(fields[1])});
  }
  w.validate();
  return w;
}

Waveform waveform_from_text(const std::string& text) {
  std::istringstream in(text);
  return waveform_from_text(in);
}

}  // namespace rramtk
