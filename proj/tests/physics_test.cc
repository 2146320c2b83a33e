// Copyright 2026 The evperf Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evperf/physics.h"

#include <gtest/gtest.h>

#include <cmath>

#include "evperf/errors.h"

namespace evperf {
namespace {

// The binary product 96 * 3.7 is a rounding tie and lands one ulp above the
// double nearest 355.2, so equality is checked to one ulp.
bool within_one_ulp(double got, double want) {
  return got >= std::nextafter(want, -INFINITY) && got <= std::nextafter(want, INFINITY);
}

TEST(PackTest, SeriesVoltageAnchors) {
  PackConfig p;
  p.n_series = 96;
  EXPECT_TRUE(within_one_ulp(pack_voltage(p), 355.2)) << pack_voltage(p);
  p.n_series = 192;
  EXPECT_TRUE(within_one_ulp(pack_voltage(p), 710.4)) << pack_voltage(p);
  p.n_series = 1;
  EXPECT_EQ(pack_voltage(p), 3.7);
  EXPECT_NEAR(pack_min_voltage(p), 3.0, 0);
}

PackConfig resistance_pack(std::int64_t ns, std::int64_t np, double r_cell, double r_int) {
  PackConfig p;
  p.n_series = ns;
  p.n_parallel = np;
  p.r_cell = r_cell;
  p.r_interconnects = r_int;
  return p;
}

TEST(PackTest, ResistanceExamples) {
  EXPECT_DOUBLE_EQ(pack_resistance(resistance_pack(2, 1, 0.01, 0)), 0.02);
  EXPECT_DOUBLE_EQ(pack_resistance(resistance_pack(1, 2, 0.01, 0)), 0.005);
  EXPECT_NEAR(pack_resistance(resistance_pack(96, 4, 0.002, 0.005)), 0.053, 1e-15);
}

TEST(PackTest, ResistanceMonotone) {
  for (std::int64_t ns = 1; ns < 200; ns += 7) {
    for (std::int64_t np = 1; np < 80; np += 3) {
      const double r = pack_resistance(resistance_pack(ns, np, 0.02, 0.004));
      EXPECT_LE(pack_resistance(resistance_pack(ns, np + 1, 0.02, 0.004)), r);
      EXPECT_GE(pack_resistance(resistance_pack(ns + 1, np, 0.02, 0.004)), r);
    }
  }
}

PackConfig power_pack() {
  PackConfig p = resistance_pack(100, 1, 0.001, 0.0);
  p.v_cell_nominal = 4.0;
  p.v_cell_min = 3.0;
  return p;
}

TEST(PackTest, MaxPowerExamples) {
  PackConfig p = power_pack();
  EXPECT_NEAR(pack_max_power(p), 400e3, 1e-6);
  p.power_limit = PowerLimitModel::kCutoffPoint;
  EXPECT_NEAR(pack_max_power(p), 300e3, 1e-6);
  p = power_pack();
  p.v_cell_min = p.v_cell_nominal;
  EXPECT_EQ(pack_max_power(p), 0.0);
}

TEST(PackTest, MaxPowerLinearInParallelCount) {
  PackConfig p = power_pack();
  const double base = pack_max_power(p);
  for (std::int64_t np = 2; np <= 64; ++np) {
    p.n_parallel = np;
    EXPECT_NEAR(pack_max_power(p) / base, static_cast<double>(np), 1e-9 * static_cast<double>(np));
  }
}

TEST(PackTest, EnergyFromCellCount) {
  PackConfig p;
  p.n_series = 96;
  p.n_parallel = 30;
  p.cell_capacity = 5.0;
  EXPECT_NEAR(pack_energy_kwh(p), 2880 * 3.7 * 5.0 / 1000.0, 1e-12);
}

TEST(PackTest, TerminalVoltageAndLoss) {
  EXPECT_EQ(terminal_voltage(400, 0, 0.1), 400.0);
  EXPECT_NEAR(terminal_voltage(400, 100, 0.1), 390.0, 1e-12);
  EXPECT_NEAR(resistive_loss(100, 0.1), 1000.0, 1e-9);
}

TEST(MassTest, Examples) {
  VehicleParams v;
  v.base_mass = 1500;
  PackConfig p;
  p.n_series = 10;
  p.n_parallel = 10;
  p.cell_mass = 1.0;
  p.pack_overhead_mass_fraction = 0.0;
  EXPECT_DOUBLE_EQ(total_mass(v, p), 1600.0);
  p.pack_overhead_mass_fraction = 0.3;
  EXPECT_DOUBLE_EQ(total_mass(v, p), 1630.0);
  const double m = total_mass(v, p);
  ++p.n_series;
  EXPECT_GT(total_mass(v, p), m);
  --p.n_series;
  ++p.n_parallel;
  EXPECT_GT(total_mass(v, p), m);
}

TEST(ForceTest, TractiveRegimes) {
  VehicleParams v;
  v.motor_torque_max = 300;
  v.gear_ratio = 9;
  v.driveline_efficiency = 0.95;
  v.wheel_radius = 0.33;
  v.traction_limit_accel = 50.0;
  const PackConfig p;
  const double torque_limited = 300 * 9 * 0.95 / 0.33;
  EXPECT_NEAR(torque_limited, 7772.7, 0.05);
  EXPECT_DOUBLE_EQ(tractive_force(v, p, 0.0), torque_limited);
  EXPECT_DOUBLE_EQ(tractive_force(v, p, 1.0), torque_limited);
  const double fast = 60.0;
  EXPECT_DOUBLE_EQ(tractive_force(v, p, fast), 0.95 * pack_max_power(p) / fast);
  v.traction_limit_accel = 1.0;
  EXPECT_DOUBLE_EQ(tractive_force(v, p, 1.0), total_mass(v, p));
}

TEST(ForceTest, ResistiveExamples) {
  VehicleParams v;
  v.air_density = 1.225;
  v.c_d = 0.3;
  v.frontal_area = 2.0;
  const PackConfig p;
  const double roll = v.c_rr * total_mass(v, p) * v.g;
  EXPECT_DOUBLE_EQ(resistive_forces(v, p, 0.0), roll);
  EXPECT_NEAR(resistive_forces(v, p, 10.0) - roll, 36.75, 1e-12);
  const double aero = resistive_forces(v, p, 5.0) - roll;
  EXPECT_NEAR(resistive_forces(v, p, 20.0) - roll, 16 * aero, 1e-9);
}

// Drag and rolling off; effective wheel power eta * P_max = 300 kW; mass
// 2000 kg; torque and traction far above the power limit.
struct PowerLimitedCar {
  VehicleParams v;
  PackConfig p;
};

PowerLimitedCar power_limited_car(double mass = 2000.0) {
  PowerLimitedCar c;
  c.p = power_pack();
  c.p.r_cell = 400.0 * 100.0 / 300e3 / 100.0;
  c.p.cell_mass = 0.01;
  c.p.pack_overhead_mass_fraction = 0.0;
  c.v.base_mass = mass - 1.0;
  c.v.c_d = 0.0;
  c.v.c_rr = 0.0;
  c.v.driveline_efficiency = 1.0;
  c.v.motor_torque_max = 1e9;
  c.v.traction_limit_accel = 1e9;
  return c;
}

TEST(IntegratorTest, ConstantPowerClosedForm) {
  const auto c = power_limited_car();
  ASSERT_NEAR(pack_max_power(c.p), 300e3, 1e-6);
  ASSERT_NEAR(total_mass(c.v, c.p), 2000.0, 1e-9);
  const double closed = 2000.0 * kTargetSpeed * kTargetSpeed / (2 * 300e3);
  EXPECT_NEAR(closed, 2.572, 5e-4);
  const double t = accel_time_0_100(c.v, c.p);
  EXPECT_LT(std::abs(t - closed) / closed, 0.01);
}

TEST(IntegratorTest, StepHalvingConverges) {
  const auto c = power_limited_car();
  IntegratorOptions fine;
  fine.step = 5e-4;
  const double a = accel_time_0_100(c.v, c.p), b = accel_time_0_100(c.v, c.p, fine);
  EXPECT_LT(std::abs(a - b) / b, 1e-3);
  const VehicleParams v;
  const PackConfig p;
  const double d = accel_time_0_100(v, p), e = accel_time_0_100(v, p, fine);
  EXPECT_LT(std::abs(d - e) / e, 1e-3);
}

TEST(IntegratorTest, DoublingMassDoublesPowerLimitedTime) {
  const auto a = power_limited_car(2000), b = power_limited_car(4000);
  const double ta = accel_time_0_100(a.v, a.p), tb = accel_time_0_100(b.v, b.p);
  EXPECT_NEAR(tb / ta, 2.0, 2e-3);
}

TEST(IntegratorTest, EnergyBalance) {
  const auto c = power_limited_car();
  const auto run = simulate_acceleration(c.v, c.p);
  const double m = total_mass(c.v, c.p);
  const double kinetic = 0.5 * m * (kTargetSpeed * kTargetSpeed - kMinSpeed * kMinSpeed);
  EXPECT_LT(std::abs(run.wheel_energy - kinetic) / kinetic, 0.01);
  EXPECT_GT(run.steps, 0u);
}

TEST(IntegratorTest, TimeGrowsWithMass) {
  VehicleParams v;
  const PackConfig p;
  double last = 0.0;
  for (double base = 1000; base <= 2600; base += 200) {
    v.base_mass = base;
    const double t = accel_time_0_100(v, p);
    EXPECT_GT(t, last);
    last = t;
  }
}

TEST(IntegratorTest, UnreachableTargetThrows) {
  VehicleParams v;
  v.c_d = 5.0;
  v.frontal_area = 10.0;
  v.motor_torque_max = 30.0;
  EXPECT_THROW(accel_time_0_100(v, PackConfig{}), UnreachableSpeedError);
  IntegratorOptions short_limit;
  short_limit.max_time = 1.0;
  EXPECT_THROW(accel_time_0_100(VehicleParams{}, PackConfig{}, short_limit),
               UnreachableSpeedError);
}

int curvature_sign_changes(const std::vector<SweepPoint>& sweep) {
  int changes = 0, last = 0;
  for (std::size_t i = 2; i < sweep.size(); ++i) {
    const double d2 = sweep[i].accel_time - 2 * sweep[i - 1].accel_time + sweep[i - 2].accel_time;
    const int s = d2 > 0 ? 1 : (d2 < 0 ? -1 : 0);
    if (s != 0 && last != 0 && s != last) ++changes;
    if (s != 0) last = s;
  }
  return changes;
}

TEST(SweepTest, DefaultCurveHasAtMostOneInflection) {
  const auto sweep = diminishing_returns_sweep(VehicleParams{}, PackConfig{}, 4, 80);
  ASSERT_EQ(sweep.size(), 77u);
  EXPECT_LE(curvature_sign_changes(sweep), 1);
  // Gains shrink: the time falls steeply at first and flattens out.
  EXPECT_GT(sweep[0].accel_time - sweep[1].accel_time,
            sweep[10].accel_time - sweep[11].accel_time);
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    EXPECT_GT(sweep[i].cell_count, sweep[i - 1].cell_count);
    EXPECT_GT(sweep[i].total_mass, sweep[i - 1].total_mass);
    EXPECT_LT(sweep[i].pack_resistance, sweep[i - 1].pack_resistance);
  }
}

TEST(SweepTest, MasslessCellsNeverSlowDown) {
  PackConfig p;
  p.cell_mass = 1e-12;
  const auto sweep = diminishing_returns_sweep(VehicleParams{}, p, 2, 80);
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    EXPECT_LE(sweep[i].accel_time, sweep[i - 1].accel_time + 1e-12);
  }
}

TEST(SweepTest, AmplePowerMeansMassOnlyHurts) {
  PackConfig p;
  p.r_cell = 1e-9;
  p.r_interconnects = 0.0;
  const auto sweep = diminishing_returns_sweep(VehicleParams{}, p, 2, 80);
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    EXPECT_GE(sweep[i].accel_time, sweep[i - 1].accel_time);
  }
}

TEST(SweepTest, EmptyRangeRejected) {
  EXPECT_THROW(diminishing_returns_sweep(VehicleParams{}, PackConfig{}, 10, 9), InputError);
  EXPECT_THROW(diminishing_returns_sweep(VehicleParams{}, PackConfig{}, 0, 9), InputError);
}

TEST(SynthTest, DefaultRangesCoverAllClasses) {
  SynthConfig sc;
  sc.noise_sd = 0.05;
  const Dataset ds = synth_dataset(sc, VehicleParams{}, PackConfig{});
  ASSERT_EQ(ds.size(), 300u);
  std::vector<int> counts(3, 0);
  for (auto l : ds.labels) ++counts[static_cast<std::size_t>(l)];
  for (int c : counts) EXPECT_GE(c, 10);
}

TEST(SynthTest, DeterministicPerSeed) {
  SynthConfig sc;
  sc.noise_sd = 0.0;
  sc.n_samples = 50;
  const auto a = synth_records(sc, VehicleParams{}, PackConfig{});
  const auto b = synth_records(sc, VehicleParams{}, PackConfig{});
  EXPECT_EQ(a, b);
  sc.seed = 43;
  EXPECT_NE(synth_records(sc, VehicleParams{}, PackConfig{}), a);
}

TEST(SynthTest, SampleDependsOnlyOnSeedAndIndex) {
  SynthConfig sc;
  sc.n_samples = 20;
  const auto small = synth_records(sc, VehicleParams{}, PackConfig{});
  sc.n_samples = 40;
  const auto large = synth_records(sc, VehicleParams{}, PackConfig{});
  for (std::size_t i = 0; i < small.size(); ++i) EXPECT_EQ(small[i], large[i]);
}

TEST(SynthTest, FeaturesFollowThePhysics) {
  SynthConfig sc;
  sc.n_samples = 100;
  sc.noise_sd = 0.0;
  for (const auto& s : synth_samples(sc, VehicleParams{}, PackConfig{})) {
    const auto& r = s.record;
    EXPECT_EQ(r.number_of_cells, s.pack.cell_count());
    EXPECT_NEAR(*r.battery_capacity,
                static_cast<double>(s.pack.cell_count()) * s.pack.v_cell_nominal *
                    s.pack.cell_capacity / 1000.0,
                1e-9);
    EXPECT_EQ(r.weight, total_mass(s.vehicle, s.pack));
    EXPECT_EQ(r.torque, s.vehicle.motor_torque_max);
    EXPECT_EQ(r.accel_0_100, s.clean_time);
    EXPECT_DOUBLE_EQ(s.clean_time, accel_time_0_100(s.vehicle, s.pack));
    EXPECT_GE(s.pack.n_series, 84);
    EXPECT_LE(s.pack.n_parallel, 64);
  }
}

TEST(SynthTest, LabelsAreBinnedTimes) {
  SynthConfig sc;
  sc.n_samples = 120;
  const auto records = synth_records(sc, VehicleParams{}, PackConfig{});
  const Dataset ds = synth_dataset(sc, VehicleParams{}, PackConfig{});
  ASSERT_EQ(ds.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(ds.labels[i], bin_acceleration(*records[i].accel_0_100));
  }
}

TEST(SynthTest, DegenerateRangesRejected) {
  SynthConfig sc;
  sc.n_parallel = {10, 5};
  EXPECT_THROW(sc.validate(), InputError);
  sc = {};
  sc.r_cell = {-1, 0.02};
  EXPECT_THROW(sc.validate(), InputError);
  sc = {};
  sc.noise_sd = -0.1;
  EXPECT_THROW(sc.validate(), InputError);
  sc = {};
  sc.n_samples = 0;
  EXPECT_THROW(sc.validate(), InputError);
  sc = {};
  sc.motor_torque = {5, 5};
  sc.n_samples = 5;
  EXPECT_THROW(synth_records(sc, VehicleParams{}, PackConfig{}), InputError);
  sc = {};
  sc.base_mass = {1500, 1500};
  EXPECT_NO_THROW(sc.validate());
}

TEST(ValidateTest, PackAndVehicle) {
  PackConfig p;
  EXPECT_NO_THROW(p.validate());
  p.v_cell_min = 3.7;
  EXPECT_THROW(p.validate(), InputError);
  p = {};
  p.n_parallel = 0;
  EXPECT_THROW(p.validate(), InputError);
  VehicleParams v;
  EXPECT_NO_THROW(v.validate());
  v.driveline_efficiency = 1.2;
  EXPECT_THROW(v.validate(), InputError);
  v = {};
  v.c_d = 0.0;
  v.c_rr = 0.0;
  EXPECT_NO_THROW(v.validate());
}

}  // namespace
}  // namespace evperf
