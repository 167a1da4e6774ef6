// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_AMBI_SPHERICAL_HARMONICS_H_
#define PWSEP_AMBI_SPHERICAL_HARMONICS_H_

#include <vector>

namespace pwsep::ambi {

// Azimuth in [0, 2*pi), counter-clockwise from +x; elevation in
// [-pi/2, pi/2], positive towards +z.
struct Direction {
  double azimuth = 0.0;
  double elevation = 0.0;

  // Wraps azimuth into range and validates elevation.
  static Direction Make(double azimuth, double elevation);
  static Direction FromCartesian(double x, double y, double z);
  void ToCartesian(double& x, double& y, double& z) const;
};

inline int NumChannels(int order) { return (order + 1) * (order + 1); }
inline int Acn(int l, int m) { return l * l + l + m; }

// Ambisonic order of a full-sphere channel count; throws if not a square.
int OrderFromChannels(int channels);

// SN3D-normalized real spherical harmonic without Condon-Shortley phase
// (AmbiX convention): Y_00 = 1, Y_1-1 = sin(az)cos(el), Y_10 = sin(el),
// Y_11 = cos(az)cos(el).
double RealSh(int l, int m, const Direction& dir);

// All (L+1)^2 values in ACN order.
std::vector<double> RealShVector(int order, const Direction& dir);

}  // namespace pwsep::ambi

#endif  // PWSEP_AMBI_SPHERICAL_HARMONICS_H_
