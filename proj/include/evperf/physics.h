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

// Battery pack electrical model, longitudinal vehicle dynamics and the
// synthetic dataset generator built on them.

#ifndef EVPERF_PHYSICS_H_
#define EVPERF_PHYSICS_H_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "evperf/data_pipeline.h"

namespace evperf {

// How the deliverable pack power is estimated from the voltage window.
enum class PowerLimitModel {
  // V_ocv * (V_ocv - V_min) / R: open-circuit voltage times the current that
  // sags the terminal to the cutoff.
  kOpenCircuit,
  // V_min * (V_ocv - V_min) / R: power actually delivered at the cutoff.
  kCutoffPoint,
};

struct PackConfig {
  std::int64_t n_series = 96;
  std::int64_t n_parallel = 30;
  double r_cell = 0.025;            // ohm
  double r_interconnects = 0.005;   // ohm
  double v_cell_nominal = 3.7;      // V
  double v_cell_min = 3.0;          // V
  double cell_mass = 0.07;          // kg
  double pack_overhead_mass_fraction = 0.35;
  double cell_capacity = 5.0;       // Ah
  PowerLimitModel power_limit = PowerLimitModel::kOpenCircuit;

  std::int64_t cell_count() const { return n_series * n_parallel; }
  // Throws InputError naming the first invalid field.
  void validate() const;
};

struct VehicleParams {
  double base_mass = 1500.0;  // kg, without the pack
  double c_d = 0.28;
  double frontal_area = 2.3;  // m^2
  double air_density = 1.225; // kg/m^3
  double c_rr = 0.011;
  double g = 9.81;            // m/s^2
  double wheel_radius = 0.34; // m
  double gear_ratio = 9.0;
  double driveline_efficiency = 0.92;
  double motor_torque_max = 420.0;     // N*m
  double traction_limit_accel = 9.0;   // m/s^2

  // Drag and rolling coefficients may be zero; everything else must be
  // positive. Throws InputError.
  void validate() const;
};

double pack_voltage(const PackConfig& p);
double pack_min_voltage(const PackConfig& p);
// Series strings add, parallel strings divide: n_s * r_cell / n_p + r_int.
double pack_resistance(const PackConfig& p);
double pack_max_power(const PackConfig& p);
double pack_energy_kwh(const PackConfig& p);

double terminal_voltage(double v_ocv, double current, double resistance);
double resistive_loss(double current, double resistance);

double total_mass(const VehicleParams& v, const PackConfig& p);

// Speeds below this are clamped in the power-limited force term.
inline constexpr double kMinSpeed = 0.1;  // m/s
inline constexpr double kTargetSpeed = 100.0 / 3.6;  // m/s

// Wheel force: the least of the motor torque limit, the battery power limit
// and the tyre traction limit.
double tractive_force(const VehicleParams& v, const PackConfig& p, double speed);
// Aerodynamic drag plus rolling resistance.
double resistive_forces(const VehicleParams& v, const PackConfig& p,
                        double speed);

class UnreachableSpeedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntegratorOptions {
  double step = 1e-3;  // s
  double start_speed = kMinSpeed;
  double target_speed = kTargetSpeed;
  double max_time = 120.0;  // s
};

struct AccelRun {
  double time = 0.0;          // s, start_speed -> target_speed
  double wheel_energy = 0.0;  // J delivered by the tractive force
  std::size_t steps = 0;
};

// Fixed-step RK4 on dv/dt = (F_tractive - F_resistive) / m. The crossing of
// the target speed is located by linear interpolation within the last step.
// Throws UnreachableSpeedError when the net force vanishes first or the time
// limit is hit.
AccelRun simulate_acceleration(const VehicleParams& v, const PackConfig& p,
                               const IntegratorOptions& opts = {});
double accel_time_0_100(const VehicleParams& v, const PackConfig& p,
                        const IntegratorOptions& opts = {});

struct SweepPoint {
  std::int64_t n_parallel = 0;
  std::int64_t cell_count = 0;
  double total_mass = 0.0;
  double pack_resistance = 0.0;
  double max_power = 0.0;
  double accel_time = 0.0;
};

// Recomputes mass, resistance, power and 0-100 time for each parallel count
// in [n_parallel_min, n_parallel_max].
std::vector<SweepPoint> diminishing_returns_sweep(const VehicleParams& v,
                                                  const PackConfig& pack_template,
                                                  std::int64_t n_parallel_min,
                                                  std::int64_t n_parallel_max);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

// Parameter ranges sampled uniformly per synthetic vehicle. Integer ranges
// (series/parallel counts) are inclusive. A range with lo == hi pins the
// parameter.
struct SynthConfig {
  std::size_t n_samples = 300;
  std::uint64_t seed = 42;
  double noise_sd = 0.01;  // sd of Gaussian noise on log(0-100 time)

  Range n_series{84, 200};
  Range n_parallel{8, 64};
  Range r_cell{0.022, 0.028};
  Range cell_mass{0.065, 0.075};
  Range cell_capacity{4.5, 5.5};
  Range base_mass{1150, 2100};
  Range motor_torque{250, 950};
  Range gear_ratio{8.8, 9.2};
  Range c_d{0.23, 0.32};
  Range frontal_area{2.1, 2.6};

  // Throws InputError for inverted, non-finite or non-physical ranges.
  void validate() const;
};

struct SynthSample {
  PackConfig pack;
  VehicleParams vehicle;
  double clean_time = 0.0;  // noise-free 0-100 time
  VehicleRecord record;     // features and the noisy time
};

// Per-sample random streams derived from the seed, so each sample depends
// only on (seed, index). Draws that cannot reach 100 km/h are redrawn.
std::vector<SynthSample> synth_samples(const SynthConfig& sc,
                                       const VehicleParams& vehicle_template,
                                       const PackConfig& pack_template);
std::vector<VehicleRecord> synth_records(const SynthConfig& sc,
                                         const VehicleParams& vehicle_template,
                                         const PackConfig& pack_template);
// Labeled dataset over the default feature columns.
Dataset synth_dataset(const SynthConfig& sc, const VehicleParams& vehicle_template,
                      const PackConfig& pack_template);

// Approximate range on a full pack at a steady 90 km/h.
double range_proxy_km(const VehicleParams& v, const PackConfig& p);

}  // namespace evperf

#endif  // EVPERF_PHYSICS_H_
