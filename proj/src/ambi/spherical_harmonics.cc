// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/ambi/spherical_harmonics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pwsep::ambi {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Associated Legendre function P_l^m(x), m >= 0, without the (-1)^m phase.
double AssocLegendre(int l, int m, double x) {
  double pmm = 1.0;
  if (m > 0) {
    const double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
    double fact = 1.0;
    for (int i = 1; i <= m; ++i) {
      pmm *= fact * s;
      fact += 2.0;
    }
  }
  if (l == m) return pmm;
  double pmmp1 = x * (2.0 * m + 1.0) * pmm;
  if (l == m + 1) return pmmp1;
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    pll = ((2.0 * ll - 1.0) * x * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
    pmm = pmmp1;
    pmmp1 = pll;
  }
  return pll;
}

double Sn3dNorm(int l, int m) {
  // sqrt((2 - delta_m0) * (l-|m|)! / (l+|m|)!)
  double ratio = 1.0;
  for (int k = l - m + 1; k <= l + m; ++k) ratio /= k;
  return std::sqrt((m == 0 ? 1.0 : 2.0) * ratio);
}

}  // namespace

Direction Direction::Make(double azimuth, double elevation) {
  if (!std::isfinite(azimuth) || !std::isfinite(elevation)) {
    throw std::invalid_argument("Direction: non-finite angle");
  }
  if (elevation < -M_PI / 2 - 1e-12 || elevation > M_PI / 2 + 1e-12) {
    throw std::invalid_argument("Direction: elevation " + std::to_string(elevation) +
                                " outside [-pi/2, pi/2]");
  }
  double az = std::fmod(azimuth, kTwoPi);
  if (az < 0) az += kTwoPi;
  if (az >= kTwoPi) az = 0.0;
  return Direction{az, std::clamp(elevation, -M_PI / 2, M_PI / 2)};
}

Direction Direction::FromCartesian(double x, double y, double z) {
  const double r = std::sqrt(x * x + y * y + z * z);
  if (r == 0.0) throw std::invalid_argument("Direction: zero vector has no direction");
  return Make(std::atan2(y, x), std::asin(std::clamp(z / r, -1.0, 1.0)));
}

void Direction::ToCartesian(double& x, double& y, double& z) const {
  x = std::cos(azimuth) * std::cos(elevation);
  y = std::sin(azimuth) * std::cos(elevation);
  z = std::sin(elevation);
}

int OrderFromChannels(int channels) {
  const int order = static_cast<int>(std::lround(std::sqrt(static_cast<double>(channels)))) - 1;
  if (order < 0 || NumChannels(order) != channels) {
    throw std::invalid_argument("channel count " + std::to_string(channels) +
                                " is not a full-sphere Ambisonic layout");
  }
  return order;
}

double RealSh(int l, int m, const Direction& dir) {
  if (l < 0 || m < -l || m > l) {
    throw std::invalid_argument("RealSh: invalid order/mode (" + std::to_string(l) + ", " +
                                std::to_string(m) + ")");
  }
  const int am = std::abs(m);
  const double legendre = AssocLegendre(l, am, std::sin(dir.elevation));
  const double azim = m >= 0 ? std::cos(am * dir.azimuth) : std::sin(am * dir.azimuth);
  return Sn3dNorm(l, am) * legendre * azim;
}

std::vector<double> RealShVector(int order, const Direction& dir) {
  std::vector<double> out(NumChannels(order));
  for (int l = 0; l <= order; ++l) {
    for (int m = -l; m <= l; ++m) out[Acn(l, m)] = RealSh(l, m, dir);
  }
  return out;
}

}  // namespace pwsep::ambi
