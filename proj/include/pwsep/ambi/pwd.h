// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_AMBI_PWD_H_
#define PWSEP_AMBI_PWD_H_

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "pwsep/ambi/spherical_harmonics.h"

namespace pwsep::ambi {

// Multichannel time signal, channels x samples. For Ambisonic signals the
// channels are in ACN order with SN3D normalization (AmbiX).
struct AmbisonicSignal {
  Eigen::MatrixXd samples;
  double sample_rate = 16000.0;

  int channels() const { return static_cast<int>(samples.rows()); }
  Eigen::Index length() const { return samples.cols(); }
  int order() const { return OrderFromChannels(channels()); }
};

// Plane-wave-domain signal: one beamformer output per grid direction.
struct PwdSignal {
  Eigen::MatrixXd samples;
  double sample_rate = 16000.0;

  int channels() const { return static_cast<int>(samples.rows()); }
  Eigen::Index length() const { return samples.cols(); }
};

// Encoder Y (Q x (L+1)^2, entries sqrt(2l+1) * Y_lm(dir_q)) and its
// least-squares pseudo-inverse.
struct PwdMatrix {
  int order = 0;
  std::vector<Direction> directions;
  Eigen::MatrixXd encoder;  // Y
  Eigen::MatrixXd decoder;  // Y^dagger

  int num_directions() const { return static_cast<int>(directions.size()); }
  double ConditionNumber() const;
};

// Near-uniform grid of (L+1)^2 directions: the origin at order 0, a regular
// tetrahedron at order 1, stored maximum-determinant point sets at orders 2
// and 3, and a Fibonacci spiral above that.
std::vector<Direction> DefaultGrid(int order);

// Throws std::invalid_argument when the direction count is wrong or the grid
// is (numerically) rank deficient.
PwdMatrix BuildPwdMatrix(int order, const std::vector<Direction>& directions);

PwdSignal PwdEncode(const AmbisonicSignal& x, const PwdMatrix& m);
AmbisonicSignal PwdDecode(const PwdSignal& p, const PwdMatrix& m);

// Plain-text dump: header line, directions, then Y and Y^dagger one row per
// line at full double precision.
void WritePwdMatrixText(std::ostream& os, const PwdMatrix& m);
PwdMatrix ReadPwdMatrixText(std::istream& is);

}  // namespace pwsep::ambi

#endif  // PWSEP_AMBI_PWD_H_
