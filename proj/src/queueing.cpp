#include "saferoute/queueing.hpp"

#include <algorithm>
#include <cmath>

#include "saferoute/error.hpp"

namespace saferoute::queueing {

QueueModel::QueueModel(double nominal_speed, double jam_density, double beta)
    : nominal_speed_(nominal_speed), jam_density_(jam_density), beta_(beta) {
  if (!(nominal_speed_ > 0.0) || !std::isfinite(nominal_speed_)) throw DomainError("nominal speed must be positive");
  if (!(jam_density_ > 0.0) || !std::isfinite(jam_density_)) throw DomainError("jam density must be positive");
  if (!(beta_ >= 0.0) || !std::isfinite(beta_)) throw DomainError("beta must be nonnegative");
}

double waiting_time(const QueueModel& q, double density) {
  if (!(density >= 0.0)) throw DomainError("density must be nonnegative");
  if (density >= q.jam_density()) throw SaturationError("density at or above jam density (rho >= 1)");
  const double sn = q.nominal_speed();
  const double service = 1.0 / q.service_rate();
  if (density == 0.0) return service;
  const double rho = density / q.jam_density();
  const double sigma = q.sigma();
  const double queue = (rho * rho + sn * sn * density * density * sigma * sigma) /
                       (2.0 * sn * density * (1.0 - rho));
  return service + queue;
}

double speed_from_density(const QueueModel& q, double density) {
  if (!(density >= 0.0) || density > q.jam_density()) {
    throw DomainError("density outside [0, K_jam]");
  }
  const double kj = q.jam_density();
  const double b2 = q.beta() * q.beta();
  return 2.0 * q.nominal_speed() * (kj - density) / (2.0 * kj + density * (b2 - 1.0));
}

double relative_speed(const QueueModel& q, double density) {
  return speed_from_density(q, density) / q.nominal_speed();
}

double density_from_speed(const QueueModel& q, double speed) {
  const double sn = q.nominal_speed();
  if (!(speed >= 0.0) || speed > sn) throw DomainError("speed outside [0, S_N]");
  const double b2 = q.beta() * q.beta();
  return 2.0 * q.jam_density() * (sn - speed) / (speed * (b2 - 1.0) + 2.0 * sn);
}

double max_flow(const QueueModel& q) {
  const double sn = q.nominal_speed();
  if (q.beta() == 1.0) return sn * q.jam_density() / 4.0;

  const auto flow = [&](double s) { return s * density_from_speed(q, s); };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = sn;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = flow(x1);
  double f2 = flow(x2);
  for (int i = 0; i < 200 && hi - lo > 1e-13 * sn; ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = flow(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = flow(x1);
    }
  }
  return flow(0.5 * (lo + hi));
}

SpeedRoots speeds_from_flow(const QueueModel& q, double flow) {
  if (!(flow >= 0.0)) throw DomainError("flow must be nonnegative");
  const double fmax = max_flow(q);
  if (flow > fmax * (1.0 + 1e-12)) {
    throw DomainError("flow " + std::to_string(flow) + " exceeds capacity " + std::to_string(fmax) +
                      "; no real speed");
  }
  const double kj = q.jam_density();
  const double sn = q.nominal_speed();
  const double a = 2.0 * kj;
  const double b = flow * (q.beta() * q.beta() - 1.0) - 2.0 * kj * sn;
  const double c = 2.0 * flow * sn;
  const double disc = std::max(0.0, b * b - 4.0 * a * c);
  const double root = std::sqrt(disc);
  // b < 0 on the admissible domain; avoid cancellation in the small root.
  const double big = (-b + root) / (2.0 * a);
  const double small = big > 0.0 ? c / (a * big) : 0.0;
  return {std::min(small, big), std::max(small, big)};
}

QueueModel calibrate(const FlowSeries& flows, double nominal_speed, double beta) {
  const double peak = *std::max_element(flows.hourly_flows.begin(), flows.hourly_flows.end());
  if (!(peak > 0.0)) {
    throw CalibrationError("flow series " + flows.arc_id + " has no positive observation");
  }
  if (!(nominal_speed > 0.0)) throw CalibrationError("nominal speed must be positive");
  return QueueModel(nominal_speed, 4.0 * peak / nominal_speed, beta);
}

double quantile(std::array<double, kHoursPerDay> values, double fraction) {
  std::sort(values.begin(), values.end());
  const double pos = fraction * (kHoursPerDay - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min<std::size_t>(lo + 1, kHoursPerDay - 1);
  const double w = pos - static_cast<double>(lo);
  return values[lo] + w * (values[hi] - values[lo]);
}

SpeedProfileResult build_speed_profile(const QueueModel& q, const FlowSeries& flows,
                                       double congestion_quantile) {
  if (!(congestion_quantile >= 0.5 && congestion_quantile < 1.0)) {
    throw DomainError("congestion quantile must lie in [0.5, 1)");
  }
  for (double f : flows.hourly_flows) {
    if (!(f >= 0.0)) throw DomainError("negative flow in series " + flows.arc_id);
  }
  SpeedProfileResult out;
  out.threshold = quantile(flows.hourly_flows, congestion_quantile);
  const double fmax = max_flow(q);
  std::array<double, kHoursPerDay> speeds{};
  for (int h = 0; h < kHoursPerDay; ++h) {
    double f = flows.hourly_flows[static_cast<std::size_t>(h)];
    if (f > fmax) {
      // Rounding in the calibration can leave the peak a few ulps above F_max.
      if (f > fmax * (1.0 + 1e-12)) ++out.clamped_hours;
      f = fmax;
    }
    const SpeedRoots roots = speeds_from_flow(q, f);
    const bool congested = flows.hourly_flows[static_cast<std::size_t>(h)] > out.threshold;
    out.congested[static_cast<std::size_t>(h)] = congested;
    speeds[static_cast<std::size_t>(h)] = congested ? roots.congested : roots.uncongested;
  }
  out.speeds = TimeProfile(speeds);
  return out;
}

}  // namespace saferoute::queueing
