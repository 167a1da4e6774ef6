// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/ambi/pwd.h"

#include <array>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace pwsep::ambi {
namespace {

// Maximum-determinant sets for the scaled SN3D basis (cond(Y) = 1.39 and 1.55).
constexpr std::array<std::array<double, 2>, 9> kGridOrder2 = {{
    {3.438565457339867, 0.49225832223700794},
    {2.0541445776009537, 0.222191925279356},
    {0.69608034210579117, 1.3278878776094025},
    {5.91932976050047, -0.13888903594547303},
    {4.8472944393562027, 0.49710625465084329},
    {0.89257325618166961, -1.0945392923789212},
    {0.82504713510642713, 0.11717970683318894},
    {4.5801096024138976, -0.68991037772083075},
    {2.9648916879447875, -0.63576806823118792},
}};

constexpr std::array<std::array<double, 2>, 16> kGridOrder3 = {{
    {3.9657892016931058, -0.77266480733679632},
    {1.5713345429456258, 1.2644614189160528},
    {4.7209530821767851, -0.1610946338815441},
    {1.8399876221115163, -0.38440210526327978},
    {4.7033984675036855, 0.8579546288329406},
    {3.8685990749798913, 0.11661476174692913},
    {0.1199777502050025, -0.13004961177799143},
    {2.9138944468041652, -0.26248490055208129},
    {0.84392662793839379, -0.70989542072765877},
    {1.0591803756694378, 0.28945220236381586},
    {5.5861948536864281, -0.89859477796537146},
    {3.1754793900107958, 0.72761037382524874},
    {6.2614251509551195, 0.75421021488074813},
    {2.360957818961567, -1.2229607383779055},
    {2.1462240302049986, 0.42882031307320084},
    {5.5429516385699387, 0.11989260061899326},
}};

constexpr double kRankTolerance = 1e-10;

}  // namespace

double PwdMatrix::ConditionNumber() const {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(encoder);
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

std::vector<Direction> DefaultGrid(int order) {
  if (order < 0) throw std::invalid_argument("DefaultGrid: negative order");
  std::vector<Direction> dirs;
  switch (order) {
    case 0:
      dirs.push_back(Direction{0.0, 0.0});
      break;
    case 1: {
      const double v[4][3] = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
      for (const auto& p : v) dirs.push_back(Direction::FromCartesian(p[0], p[1], p[2]));
      break;
    }
    case 2:
      for (const auto& [az, el] : kGridOrder2) dirs.push_back(Direction::Make(az, el));
      break;
    case 3:
      for (const auto& [az, el] : kGridOrder3) dirs.push_back(Direction::Make(az, el));
      break;
    default: {
      const int q = NumChannels(order);
      const double golden = M_PI * (3.0 - std::sqrt(5.0));
      for (int i = 0; i < q; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / q;
        dirs.push_back(Direction::Make(golden * i, std::asin(z)));
      }
      break;
    }
  }
  return dirs;
}

PwdMatrix BuildPwdMatrix(int order, const std::vector<Direction>& directions) {
  const int n = NumChannels(order);
  if (static_cast<int>(directions.size()) != n) {
    throw std::invalid_argument("BuildPwdMatrix: order " + std::to_string(order) + " needs " +
                                std::to_string(n) + " directions, got " +
                                std::to_string(directions.size()));
  }
  PwdMatrix m;
  m.order = order;
  m.directions = directions;
  m.encoder.resize(n, n);
  for (int q = 0; q < n; ++q) {
    for (int l = 0; l <= order; ++l) {
      const double w = std::sqrt(2.0 * l + 1.0);
      for (int mm = -l; mm <= l; ++mm) m.encoder(q, Acn(l, mm)) = w * RealSh(l, mm, directions[q]);
    }
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(m.encoder);
  cod.setThreshold(kRankTolerance);
  if (cod.rank() < n) {
    throw std::invalid_argument("BuildPwdMatrix: direction grid is rank deficient (rank " +
                                std::to_string(cod.rank()) + " of " + std::to_string(n) +
                                "); choose a more uniform grid");
  }
  m.decoder = cod.pseudoInverse();
  return m;
}

PwdSignal PwdEncode(const AmbisonicSignal& x, const PwdMatrix& m) {
  if (x.channels() != m.encoder.cols()) {
    throw std::invalid_argument("PwdEncode: signal has " + std::to_string(x.channels()) +
                                " channels, matrix expects " + std::to_string(m.encoder.cols()));
  }
  return PwdSignal{m.encoder * x.samples, x.sample_rate};
}

AmbisonicSignal PwdDecode(const PwdSignal& p, const PwdMatrix& m) {
  if (p.channels() != m.decoder.cols()) {
    throw std::invalid_argument("PwdDecode: signal has " + std::to_string(p.channels()) +
                                " channels, matrix expects " + std::to_string(m.decoder.cols()));
  }
  return AmbisonicSignal{m.decoder * p.samples, p.sample_rate};
}

void WritePwdMatrixText(std::ostream& os, const PwdMatrix& m) {
  const int n = static_cast<int>(m.encoder.rows());
  const int c = static_cast<int>(m.encoder.cols());
  os << "pwd_matrix order " << m.order << " directions " << n << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& d : m.directions) os << d.azimuth << ' ' << d.elevation << '\n';
  for (int r = 0; r < n; ++r) {
    for (int k = 0; k < c; ++k) os << (k ? " " : "") << m.encoder(r, k);
    os << '\n';
  }
  for (int r = 0; r < c; ++r) {
    for (int k = 0; k < n; ++k) os << (k ? " " : "") << m.decoder(r, k);
    os << '\n';
  }
}

PwdMatrix ReadPwdMatrixText(std::istream& is) {
  std::string tag, key1, key2;
  int order = 0, n = 0;
  if (!(is >> tag >> key1 >> order >> key2 >> n) || tag != "pwd_matrix" || key1 != "order" ||
      key2 != "directions" || order < 0 || n <= 0) {
    throw std::runtime_error("ReadPwdMatrixText: malformed header");
  }
  const int c = NumChannels(order);
  PwdMatrix m;
  m.order = order;
  for (int i = 0; i < n; ++i) {
    Direction d;
    if (!(is >> d.azimuth >> d.elevation)) throw std::runtime_error("ReadPwdMatrixText: truncated");
    m.directions.push_back(d);
  }
  m.encoder.resize(n, c);
  m.decoder.resize(c, n);
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < c; ++k)
      if (!(is >> m.encoder(r, k))) throw std::runtime_error("ReadPwdMatrixText: truncated");
  for (int r = 0; r < c; ++r)
    for (int k = 0; k < n; ++k)
      if (!(is >> m.decoder(r, k))) throw std::runtime_error("ReadPwdMatrixText: truncated");
  return m;
}

}  // namespace pwsep::ambi
