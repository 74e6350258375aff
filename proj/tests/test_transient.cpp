#include <cmath>
#include <sstream>

#include "doctest.h"
#include "rramtk/transient.hpp"
#include "test_helpers.hpp"

using namespace rramtk;
using namespace rramtk::testing;

namespace {

const ModelParams& kParams = builtin_params("exp-10k17k");
const DeviceState kState{16.25e3, 10e3, 17e3};

}  // namespace

TEST_CASE("all-zero waveform leaves the state put and carries no current") {
  Waveform w;
  w.segments.push_back({0.0, 5e-3});
  w.segments.push_back({0.0, 2e-3});
  const Trace tr = run_device(kParams, kState, w, 1e-6, {true, 1});
  CHECK(tr.final_r == kState.r);
  for (const auto& row : tr.rows) {
    CHECK(row.i == 0.0);
    CHECK(row.r == kState.r);
  }
}

TEST_CASE("engine stepping equals one closed-form step on flat segments") {
  Waveform w = pulse_train(1, 0.8, 100e-6, 0.0);
  const Trace tr = run_device(kParams, kState, w, 1e-6, {false, 1});
  const double direct = analytical_step(kParams, kState.r, 0.8, 100e-6);
  CHECK(rel_diff(tr.final_r, direct) < 1e-12);
}

TEST_CASE("timestep refinement leaves piecewise-constant results unchanged") {
  Waveform w = pulse_train(7, 0.75, 130e-6, 40e-6);
  const double r1 = run_device(kParams, kState, w, 2e-6, {false, 1}).final_r;
  const double r2 = run_device(kParams, kState, w, 1e-6, {false, 1}).final_r;
  CHECK(rel_diff(r1, r2) < 1e-9);
}

TEST_CASE("reads recover the state and are transparent to programming") {
  // constant-R run: every read equals the state
  Waveform reads_only;
  for (int i = 0; i < 3; ++i) reads_only.append(read_event(0.5, 1e-3, 1e-6));
  const Trace tr = run_device(kParams, kState, reads_only, 1e-6, {false, 1});
  REQUIRE(tr.reads.size() == 3);
  for (const auto& rd : tr.reads) {
    CHECK(rel_diff(rd.rs_estimate, kState.r) < 1e-12);
  }
  CHECK(tr.final_r == kState.r);  // bit-identical: reads sit inside the guard

  // interleaving 100 reads between two pulses does not disturb the trajectory
  Waveform plain = pulse_train(2, 0.8, 100e-6, 0.0);
  Waveform with_reads = pulse_train(1, 0.8, 100e-6, 0.0);
  for (int i = 0; i < 100; ++i) with_reads.append(read_event(0.5, 1e-3, 1e-6));
  with_reads.append(pulse_train(1, 0.8, 100e-6, 0.0));
  const double r_plain = run_device(kParams, kState, plain, 1e-6, {false, 1}).final_r;
  const double r_reads = run_device(kParams, kState, with_reads, 1e-6, {false, 1}).final_r;
  CHECK(r_plain == r_reads);  // exact equality, not approximate
}

TEST_CASE("extract_rs_series preserves order and count") {
  Waveform w;
  CHECK(extract_rs_series(run_device(kParams, kState, pulse_train(1, 0.8, 1e-6, 0), 1e-6)).empty());

  CharacterizationPlan plan;
  plan.mode = CharacterizationMode::pulse_count;
  plan.v_bias = {0.8};
  plan.width = {100e-6};
  plan.n_pulses = 40;
  const auto series = build_characterization(plan);
  const Trace tr = run_device(kParams, kState, series[0].waveform, 1e-6, {false, 1});
  const auto rs = extract_rs_series(tr);
  REQUIRE(rs.size() == 40);
  for (std::size_t i = 0; i < rs.size(); ++i) CHECK(rs[i].first == i);
  // saturating run: monotone series approaching the fixed positive boundary
  for (std::size_t i = 1; i < rs.size(); ++i) CHECK(rs[i].second >= rs[i - 1].second);
  CHECK(rs.back().second < 16710.0);
}

TEST_CASE("appendix saturation shape (short horizon)") {
  CharacterizationPlan plan;
  plan.mode = CharacterizationMode::pulse_count;
  plan.v_bias = {0.8};
  plan.width = {100e-6};
  plan.n_pulses = 300;
  const auto series = build_characterization(plan);
  const Trace tr = run_device(kParams, kState, series[0].waveform, 1e-6, {false, 1});
  const auto rs = extract_rs_series(tr);
  // two thirds of the way to the 16.71 kOhm boundary within 300 pulses
  CHECK(rs.back().second > 16250.0 + 0.66 * (16710.0 - 16250.0));
  CHECK(rs.back().second < 16710.0);
}

TEST_CASE("per-pulse change grows with pulse width and with amplitude") {
  const auto first_delta = [&](double vb, double width) {
    Waveform w = pulse_train(1, vb, width, 0.0);
    const Trace tr = run_device(kParams, kState, w, 1e-6, {false, 1});
    return tr.final_r - kState.r;
  };
  const double d1 = first_delta(0.8, 1e-6);
  const double d10 = first_delta(0.8, 10e-6);
  const double d100 = first_delta(0.8, 100e-6);
  CHECK(d1 > 0);
  CHECK(d10 > d1);
  CHECK(d100 > d10);

  const double a06 = first_delta(0.6, 100e-6);
  const double a07 = first_delta(0.7, 100e-6);
  const double a08 = first_delta(0.8, 100e-6);
  CHECK(a06 > 0);
  CHECK(a07 > a06);
  CHECK(a08 > a07);

  // ON transition at -0.8 V outpaces the +0.8 V OFF transition
  const double dn = first_delta(-0.8, 100e-6);
  CHECK(std::abs(dn) > std::abs(a08));
}

TEST_CASE("state stays clamped to the admissible bounds") {
  DeviceState tight{16.7e3, 10e3, 16.701e3};  // ceiling below r_p(0.8)
  Waveform w = pulse_train(50, 0.8, 100e-6, 0.0);
  const Trace tr = run_device(kParams, tight, w, 1e-6, {false, 1});
  CHECK(tr.final_r == 16.701e3);
}

TEST_CASE("trace CSV round-trips") {
  Waveform w = pulse_train(3, 0.8, 5e-6, 2e-6);
  w.append(read_event(0.5, 20e-6, 5e-6));
  const Trace tr = run_device(kParams, kState, w, 1e-6, {true, 1});
  std::ostringstream out;
  write_trace_csv(out, tr);
  std::istringstream in(out.str());
  const Trace back = trace_from_csv(in);
  REQUIRE(back.rows.size() == tr.rows.size());
  for (std::size_t i = 0; i < tr.rows.size(); ++i) {
    CHECK(back.rows[i].t == tr.rows[i].t);
    CHECK(back.rows[i].v == tr.rows[i].v);
    CHECK(back.rows[i].i == tr.rows[i].i);
    CHECK(back.rows[i].r == tr.rows[i].r);
  }

  std::ostringstream reads;
  write_reads_csv(reads, tr);
  CHECK(reads.str().rfind("pulse_index,RS_ohm\n", 0) == 0);
}

TEST_CASE("trace rows sample current at step start") {
  Waveform w = pulse_train(1, 0.8, 3e-6, 0.0);
  const Trace tr = run_device(kParams, kState, w, 1e-6, {true, 1});
  REQUIRE(tr.rows.size() == 3);
  CHECK(tr.rows[0].r == kState.r);
  CHECK(tr.rows[0].i == current(kParams, kState.r, 0.8));
  CHECK(tr.rows[1].r > kState.r);  // state already moved before row 2
}
