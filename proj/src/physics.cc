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

#include <algorithm>
#include <cmath>
#include <string>

#include "evperf/errors.h"
#include "evperf/random.h"

namespace evperf {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }
bool non_negative(double x) { return std::isfinite(x) && x >= 0.0; }

void require_range(const Range& r, const char* name, bool allow_zero) {
  const bool finite = std::isfinite(r.lo) && std::isfinite(r.hi);
  require(finite && r.lo <= r.hi,
          std::string("synthetic range '") + name + "' is inverted or non-finite");
  require(allow_zero ? r.lo >= 0.0 : r.lo > 0.0,
          std::string("synthetic range '") + name + "' must be " +
              (allow_zero ? "non-negative" : "positive"));
}

double draw(Rng& rng, const Range& r) {
  return r.lo == r.hi ? r.lo : rng.uniform(r.lo, r.hi);
}

std::int64_t draw_int(Rng& rng, const Range& r) {
  const auto lo = static_cast<std::int64_t>(std::ceil(r.lo));
  const auto hi = static_cast<std::int64_t>(std::floor(r.hi));
  return rng.uniform_int(lo, hi);
}

}  // namespace

void PackConfig::validate() const {
  require(n_series >= 1, "n_series must be >= 1");
  require(n_parallel >= 1, "n_parallel must be >= 1");
  require(positive(r_cell), "r_cell must be > 0");
  require(non_negative(r_interconnects), "r_interconnects must be >= 0");
  require(positive(v_cell_nominal), "v_cell_nominal must be > 0");
  require(positive(v_cell_min) && v_cell_min < v_cell_nominal,
          "v_cell_min must lie in (0, v_cell_nominal)");
  require(positive(cell_mass), "cell_mass must be > 0");
  require(non_negative(pack_overhead_mass_fraction),
          "pack_overhead_mass_fraction must be >= 0");
  require(positive(cell_capacity), "cell_capacity must be > 0");
}

void VehicleParams::validate() const {
  require(positive(base_mass), "base_mass must be > 0");
  require(non_negative(c_d), "c_d must be >= 0");
  require(non_negative(frontal_area), "frontal_area must be >= 0");
  require(non_negative(air_density), "air_density must be >= 0");
  require(non_negative(c_rr), "c_rr must be >= 0");
  require(positive(g), "g must be > 0");
  require(positive(wheel_radius), "wheel_radius must be > 0");
  require(positive(gear_ratio), "gear_ratio must be > 0");
  require(positive(driveline_efficiency) && driveline_efficiency <= 1.0,
          "driveline_efficiency must lie in (0, 1]");
  require(positive(motor_torque_max), "motor_torque_max must be > 0");
  require(positive(traction_limit_accel), "traction_limit_accel must be > 0");
}

double pack_voltage(const PackConfig& p) {
  return static_cast<double>(p.n_series) * p.v_cell_nominal;
}

double pack_min_voltage(const PackConfig& p) {
  return static_cast<double>(p.n_series) * p.v_cell_min;
}

double pack_resistance(const PackConfig& p) {
  return static_cast<double>(p.n_series) * p.r_cell /
             static_cast<double>(p.n_parallel) +
         p.r_interconnects;
}

double pack_max_power(const PackConfig& p) {
  const double v_ocv = pack_voltage(p);
  const double v_min = pack_min_voltage(p);
  const double v_ref =
      p.power_limit == PowerLimitModel::kOpenCircuit ? v_ocv : v_min;
  return v_ref * (v_ocv - v_min) / pack_resistance(p);
}

double pack_energy_kwh(const PackConfig& p) {
  return static_cast<double>(p.cell_count()) * p.v_cell_nominal *
         p.cell_capacity / 1000.0;
}

double terminal_voltage(double v_ocv, double current, double resistance) {
  return v_ocv - current * resistance;
}

double resistive_loss(double current, double resistance) {
  return current * current * resistance;
}

double total_mass(const VehicleParams& v, const PackConfig& p) {
  return v.base_mass + static_cast<double>(p.cell_count()) * p.cell_mass *
                           (1.0 + p.pack_overhead_mass_fraction);
}

double tractive_force(const VehicleParams& v, const PackConfig& p, double speed) {
  const double torque_limited =
      v.motor_torque_max * v.gear_ratio * v.driveline_efficiency / v.wheel_radius;
  const double power_limited =
      v.driveline_efficiency * pack_max_power(p) / std::max(speed, kMinSpeed);
  const double traction_limited = total_mass(v, p) * v.traction_limit_accel;
  return std::min({torque_limited, power_limited, traction_limited});
}

double resistive_forces(const VehicleParams& v, const PackConfig& p,
                        double speed) {
  return 0.5 * v.air_density * v.c_d * v.frontal_area * speed * speed +
         v.c_rr * total_mass(v, p) * v.g;
}

AccelRun simulate_acceleration(const VehicleParams& v, const PackConfig& p,
                               const IntegratorOptions& opts) {
  v.validate();
  p.validate();
  require(positive(opts.step), "integrator step must be > 0");
  require(opts.target_speed > opts.start_speed, "target speed must exceed start speed");

  const double mass = total_mass(v, p);
  // State (speed, wheel energy); both derivatives depend on speed only.
  auto accel = [&](double speed) {
    return (tractive_force(v, p, speed) - resistive_forces(v, p, speed)) / mass;
  };
  auto power = [&](double speed) { return tractive_force(v, p, speed) * speed; };

  if (!(accel(opts.start_speed) > 0.0)) {
    throw UnreachableSpeedError("net force is not positive at start speed");
  }

  const double h = opts.step;
  AccelRun run;
  double speed = opts.start_speed;
  double energy = 0.0;
  double t = 0.0;
  while (t < opts.max_time) {
    const double k1 = accel(speed);
    const double k2 = accel(speed + 0.5 * h * k1);
    const double k3 = accel(speed + 0.5 * h * k2);
    const double k4 = accel(speed + h * k3);
    const double e1 = power(speed);
    const double e2 = power(speed + 0.5 * h * k1);
    const double e3 = power(speed + 0.5 * h * k2);
    const double e4 = power(speed + h * k3);
    const double next_speed = speed + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double next_energy = energy + h / 6.0 * (e1 + 2.0 * e2 + 2.0 * e3 + e4);
    ++run.steps;
    if (next_speed >= opts.target_speed) {
      const double frac = (opts.target_speed - speed) / (next_speed - speed);
      run.time = t + frac * h;
      run.wheel_energy = energy + frac * (next_energy - energy);
      return run;
    }
    if (!(next_speed > speed)) {
      throw UnreachableSpeedError("force balance reached below target speed (" +
                                  std::to_string(speed * 3.6) + " km/h)");
    }
    speed = next_speed;
    energy = next_energy;
    t += h;
  }
  throw UnreachableSpeedError("target speed not reached within " +
                              std::to_string(opts.max_time) + " s");
}

double accel_time_0_100(const VehicleParams& v, const PackConfig& p,
                        const IntegratorOptions& opts) {
  return simulate_acceleration(v, p, opts).time;
}

std::vector<SweepPoint> diminishing_returns_sweep(const VehicleParams& v,
                                                  const PackConfig& pack_template,
                                                  std::int64_t n_parallel_min,
                                                  std::int64_t n_parallel_max) {
  require(n_parallel_min >= 1 && n_parallel_min <= n_parallel_max,
          "sweep range of parallel counts is empty");
  std::vector<SweepPoint> curve;
  curve.reserve(static_cast<std::size_t>(n_parallel_max - n_parallel_min + 1));
  for (auto np = n_parallel_min; np <= n_parallel_max; ++np) {
    PackConfig p = pack_template;
    p.n_parallel = np;
    SweepPoint pt;
    pt.n_parallel = np;
    pt.cell_count = p.cell_count();
    pt.total_mass = total_mass(v, p);
    pt.pack_resistance = pack_resistance(p);
    pt.max_power = pack_max_power(p);
    pt.accel_time = accel_time_0_100(v, p);
    curve.push_back(pt);
  }
  return curve;
}

void SynthConfig::validate() const {
  require(n_samples >= 1, "n_samples must be >= 1");
  require(non_negative(noise_sd), "noise_sd must be >= 0");
  require_range(n_series, "n_series", false);
  require_range(n_parallel, "n_parallel", false);
  require(std::ceil(n_series.lo) <= std::floor(n_series.hi) && n_series.hi >= 1,
          "synthetic range 'n_series' contains no integer >= 1");
  require(std::ceil(n_parallel.lo) <= std::floor(n_parallel.hi) && n_parallel.hi >= 1,
          "synthetic range 'n_parallel' contains no integer >= 1");
  require_range(r_cell, "r_cell", false);
  require_range(cell_mass, "cell_mass", false);
  require_range(cell_capacity, "cell_capacity", false);
  require_range(base_mass, "base_mass", false);
  require_range(motor_torque, "motor_torque", false);
  require_range(gear_ratio, "gear_ratio", false);
  require_range(c_d, "c_d", true);
  require_range(frontal_area, "frontal_area", true);
}

double range_proxy_km(const VehicleParams& v, const PackConfig& p) {
  constexpr double kCruise = 25.0;  // m/s
  const double wh_per_km =
      resistive_forces(v, p, kCruise) / v.driveline_efficiency / 3.6;
  return pack_energy_kwh(p) * 1000.0 / wh_per_km;
}

std::vector<SynthSample> synth_samples(const SynthConfig& sc,
                                       const VehicleParams& vehicle_template,
                                       const PackConfig& pack_template) {
  sc.validate();
  vehicle_template.validate();
  pack_template.validate();
  constexpr int kMaxAttempts = 64;

  std::vector<SynthSample> out;
  out.reserve(sc.n_samples);
  for (std::size_t i = 0; i < sc.n_samples; ++i) {
    Rng rng(derive_seed(sc.seed, i));
    bool done = false;
    for (int attempt = 0; attempt < kMaxAttempts && !done; ++attempt) {
      SynthSample s;
      s.pack = pack_template;
      s.vehicle = vehicle_template;
      s.pack.n_series = draw_int(rng, sc.n_series);
      s.pack.n_parallel = draw_int(rng, sc.n_parallel);
      s.pack.r_cell = draw(rng, sc.r_cell);
      s.pack.cell_mass = draw(rng, sc.cell_mass);
      s.pack.cell_capacity = draw(rng, sc.cell_capacity);
      s.vehicle.base_mass = draw(rng, sc.base_mass);
      s.vehicle.motor_torque_max = draw(rng, sc.motor_torque);
      s.vehicle.gear_ratio = draw(rng, sc.gear_ratio);
      s.vehicle.c_d = draw(rng, sc.c_d);
      s.vehicle.frontal_area = draw(rng, sc.frontal_area);
      const double z = rng.normal();
      try {
        s.clean_time = accel_time_0_100(s.vehicle, s.pack);
      } catch (const UnreachableSpeedError&) {
        continue;
      }
      const double observed = s.clean_time * std::exp(sc.noise_sd * z);

      auto& r = s.record;
      r.battery_capacity = pack_energy_kwh(s.pack);
      r.number_of_cells = s.pack.cell_count();
      r.weight = total_mass(s.vehicle, s.pack);
      r.torque = s.vehicle.motor_torque_max;
      r.range = range_proxy_km(s.vehicle, s.pack);
      r.accel_0_100 = observed;
      out.push_back(std::move(s));
      done = true;
    }
    if (!done) {
      throw InputError("synthetic sample " + std::to_string(i) +
                       " could not reach 100 km/h in " +
                       std::to_string(kMaxAttempts) +
                       " draws; the parameter ranges are degenerate");
    }
  }
  return out;
}

std::vector<VehicleRecord> synth_records(const SynthConfig& sc,
                                         const VehicleParams& vehicle_template,
                                         const PackConfig& pack_template) {
  auto samples = synth_samples(sc, vehicle_template, pack_template);
  std::vector<VehicleRecord> records;
  records.reserve(samples.size());
  for (auto& s : samples) records.push_back(std::move(s.record));
  return records;
}

Dataset synth_dataset(const SynthConfig& sc, const VehicleParams& vehicle_template,
                      const PackConfig& pack_template) {
  const auto records = synth_records(sc, vehicle_template, pack_template);
  const auto columns = default_feature_columns();
  return build_dataset(records, columns).dataset;
}

}  // namespace evperf
