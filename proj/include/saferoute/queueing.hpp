#pragma once

#include <array>
#include <string>
#include <utility>

#include "saferoute/model.hpp"

namespace saferoute::queueing {

// M/G/1 road-segment model. The road is split into stations of length
// 1/K_jam served at rate mu = S_N * K_jam; beta is the coefficient of
// variation of the service time, sigma = beta / mu its standard deviation.
class QueueModel {
 public:
  QueueModel(double nominal_speed, double jam_density, double beta = 1.0);

  double nominal_speed() const { return nominal_speed_; }
  double jam_density() const { return jam_density_; }
  double beta() const { return beta_; }
  double service_rate() const { return nominal_speed_ * jam_density_; }
  double sigma() const { return beta_ / service_rate(); }

 private:
  double nominal_speed_;
  double jam_density_;
  double beta_;
};

struct FlowSeries {
  std::array<double, kHoursPerDay> hourly_flows{};
  std::string direction;
  std::string arc_id;
};

// Pollaczek-Khinchine total time in system (hours) at density K veh/mi.
double waiting_time(const QueueModel& q, double density);

// Effective speed at density K: 2 S_N (K_jam - K) / (2 K_jam + K (beta^2 - 1)).
double speed_from_density(const QueueModel& q, double density);

// S / S_N.
double relative_speed(const QueueModel& q, double density);

// Density carrying speed S (inverse of speed_from_density).
double density_from_speed(const QueueModel& q, double speed);

struct SpeedRoots {
  double congested;
  double uncongested;
};

// Roots of 2 K_jam S^2 + [F (beta^2 - 1) - 2 K_jam S_N] S + 2 F S_N = 0,
// ordered congested (low) then uncongested (high).
SpeedRoots speeds_from_flow(const QueueModel& q, double flow);

// Capacity flow. Closed form S_N K_jam / 4 for beta = 1, golden-section
// maximization of K(S) * S otherwise.
double max_flow(const QueueModel& q);

// Jam density from the series peak taken as capacity (beta = 1 inversion).
QueueModel calibrate(const FlowSeries& flows, double nominal_speed, double beta = 1.0);

inline constexpr double kDefaultCongestionQuantile = 0.854;

// Linear-interpolation sample quantile (numpy's default definition).
double quantile(std::array<double, kHoursPerDay> values, double fraction);

struct SpeedProfileResult {
  TimeProfile speeds;
  double threshold = 0.0;
  std::array<bool, kHoursPerDay> congested{};
  int clamped_hours = 0;  // observations above F_max, clamped
};

// Per hour, the congested root when the flow exceeds the series quantile
// threshold and the uncongested root otherwise.
SpeedProfileResult build_speed_profile(const QueueModel& q, const FlowSeries& flows,
                                       double congestion_quantile = kDefaultCongestionQuantile);

}  // namespace saferoute::queueing
