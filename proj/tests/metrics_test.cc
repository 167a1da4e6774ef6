// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pwsep/ad/grad_check.h"
#include "pwsep/ad/ops.h"
#include "pwsep/metrics/loss.h"
#include "pwsep/metrics/metrics.h"
#include "pwsep/util/rng.h"

using namespace pwsep;
using namespace pwsep::metrics;
using Catch::Matchers::WithinAbs;

namespace {

Signal RandomSignal(Rng& rng, int m, int n) {
  Signal s(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = rng.Normal();
  return s;
}

// Direct evaluation of the SI-SDR definition with the closed-form scale.
double ReferenceSiSdr(const Signal& est, const Signal& ref) {
  double dot = 0, rr = 0;
  for (Eigen::Index i = 0; i < est.size(); ++i) {
    dot += est.data()[i] * ref.data()[i];
    rr += ref.data()[i] * ref.data()[i];
  }
  const double a = dot / rr;
  double num = 0, den = 0;
  for (Eigen::Index i = 0; i < est.size(); ++i) {
    num += a * ref.data()[i] * a * ref.data()[i];
    den += (est.data()[i] - a * ref.data()[i]) * (est.data()[i] - a * ref.data()[i]);
  }
  return 10 * std::log10(num / den);
}

// All permutations by explicit enumeration.
std::vector<std::vector<int>> AllPerms(int n) {
  std::vector<std::vector<int>> out;
  if (n == 1) return {{0}};
  for (int first = 0; first < n; ++first) {
    for (auto rest : AllPerms(n - 1)) {
      for (int& r : rest) r += r >= first;
      rest.insert(rest.begin(), first);
      out.push_back(rest);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("SI-SDR reference values", "[metrics]") {
  Rng rng(1);
  const Signal c = RandomSignal(rng, 4, 500);
  CHECK(SiSdr(c, c) == kCapDb);
  CHECK(SiSdr(2.0 * c, c) == kCapDb);

  // Noise orthogonal to c within every channel, at 1/100 of its power.
  Signal e = RandomSignal(rng, 4, 500);
  for (int ch = 0; ch < 4; ++ch) {
    e.row(ch) -= e.row(ch).dot(c.row(ch)) / c.row(ch).squaredNorm() * c.row(ch);
  }
  e *= std::sqrt(c.squaredNorm() / 100.0 / e.squaredNorm());
  double alpha = 0;
  CHECK_THAT(SiSdr(c + e, c, &alpha), WithinAbs(20.0, 1e-6));
  CHECK_THAT(alpha, WithinAbs(1.0, 1e-12));

  for (int trial = 0; trial < 20; ++trial) {
    const Signal ref = RandomSignal(rng, 4, 200);
    const Signal est = ref + 0.5 * RandomSignal(rng, 4, 200);
    const double base = SiSdr(est, ref);
    CHECK_THAT(base, WithinAbs(ReferenceSiSdr(est, ref), 1e-9));
    for (double beta : {0.1, 1.0, 10.0}) CHECK_THAT(SiSdr(beta * est, ref), WithinAbs(base, 1e-9));
    // The closed-form scale is optimal: nearby scales never do better.
    double a = 0;
    SiSdr(est, ref, &a);
    const double best_err = (est - a * ref).squaredNorm();
    for (double d : {-1e-3, -1e-6, 1e-6, 1e-3}) {
      CHECK((est - (a + d) * ref).squaredNorm() >= best_err - 1e-9);
    }
  }
  CHECK_THROWS_AS(SiSdr(c, Signal::Zero(4, 500)), std::invalid_argument);
  CHECK_THROWS_AS(SiSdr(c, Signal::Zero(4, 10)), std::invalid_argument);
}

TEST_CASE("PIT assignment", "[metrics]") {
  Eigen::MatrixXd a(2, 2), b(2, 2);
  a << 0, 10, 10, 0;
  b << 10, 0, 0, 10;
  CHECK(PitPermutation(a) == std::vector<int>{0, 1});
  CHECK(PitPermutation(b) == std::vector<int>{1, 0});
  Rng rng(2);
  for (int n = 3; n <= 6; ++n) {
    for (int trial = 0; trial < 30; ++trial) {
      Eigen::MatrixXd cost(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cost(i, j) = rng.Uniform(-5, 5);
      double best = 1e300;
      for (const auto& p : AllPerms(n)) {
        double s = 0;
        for (int i = 0; i < n; ++i) s += cost(i, p[i]);
        best = std::min(best, s);
      }
      const auto p = PitPermutation(cost);
      double s = 0;
      for (int i = 0; i < n; ++i) s += cost(i, p[i]);
      CHECK_THAT(s, WithinAbs(best, 1e-12));
      auto sorted = p;
      std::sort(sorted.begin(), sorted.end());
      std::vector<int> iota(n);
      std::iota(iota.begin(), iota.end(), 0);
      CHECK(sorted == iota);
    }
  }
}

TEST_CASE("multichannel SI-SDR under PIT matches brute force", "[metrics]") {
  Rng rng(3);
  for (int j = 1; j <= 3; ++j) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Signal> ref, est;
      for (int s = 0; s < j; ++s) ref.push_back(RandomSignal(rng, 4, 120));
      for (int s = 0; s < j; ++s) est.push_back(ref[(s + 1) % j] + rng.Uniform(0.1, 2.0) * RandomSignal(rng, 4, 120));
      double best = -1e300;
      for (const auto& p : AllPerms(j)) {
        double s = 0;
        for (int r = 0; r < j; ++r) s += ReferenceSiSdr(est[p[r]], ref[r]);
        best = std::max(best, s / j);
      }
      auto res = MultichannelSiSdr(est, ref);
      CHECK_THAT(res.mean_db, WithinAbs(best, 1e-9));
      // Reordering the estimates does not change the value.
      std::vector<Signal> rev(est.rbegin(), est.rend());
      CHECK_THAT(MultichannelSiSdr(rev, ref).mean_db, WithinAbs(res.mean_db, 1e-12));
      REQUIRE(res.alignment.alphas.size() == static_cast<std::size_t>(j));
    }
  }
}

TEST_CASE("SI-SDR improvement", "[metrics]") {
  Rng rng(4);
  std::vector<Signal> ref = {RandomSignal(rng, 4, 300), RandomSignal(rng, 4, 300)};
  const Signal mix = ref[0] + ref[1];
  CHECK_THAT(SiSdrImprovement(mix, {mix, mix}, ref), WithinAbs(0.0, 1e-12));
  const double base = (SiSdr(mix, ref[0]) + SiSdr(mix, ref[1])) / 2;
  CHECK_THAT(SiSdrImprovement(mix, ref, ref), WithinAbs(kCapDb - base, 1e-9));
  CHECK(kCapDb - base > 0);
}

TEST_CASE("SI-ISR", "[metrics]") {
  Rng rng(5);
  const Signal c = RandomSignal(rng, 4, 400);
  CHECK(SiIsr(c, c, 32) == kCapDb);
  CHECK(SiIsr(3.0 * c, c, 1) == kCapDb);

  // Same 2-tap filter on every channel.
  Signal filtered(4, 400);
  for (int ch = 0; ch < 4; ++ch) {
    filtered(ch, 0) = 0.8 * c(ch, 0);
    for (int n = 1; n < 400; ++n) filtered(ch, n) = 0.8 * c(ch, n) - 0.35 * c(ch, n - 1);
  }
  CHECK(SiIsr(filtered, c, 2) == kCapDb);
  CHECK(SiIsr(filtered, c, 32) == kCapDb);

  Signal swapped = c;
  swapped.row(1) = c.row(3);
  swapped.row(3) = c.row(1);
  const double bad = SiIsr(swapped, c, 32);
  CHECK(std::isfinite(bad));
  CHECK(bad < 10.0);

  const Signal noisy = c + 0.1 * RandomSignal(rng, 4, 400);
  for (double beta : {0.1, 10.0}) CHECK_THAT(SiIsr(beta * noisy, c, 8), WithinAbs(SiIsr(noisy, c, 8), 1e-9));

  // Rank-deficient basis (silent channels) falls back to the ridge solve.
  Signal sparse = Signal::Zero(4, 400);
  sparse.row(0) = c.row(0);
  sparse.row(2) = c.row(0);
  CHECK(std::isfinite(SiIsr(c, sparse, 4)));
  CHECK_THROWS_AS(SiIsr(c, Signal::Zero(4, 400)), std::invalid_argument);
}

TEST_CASE("evaluation record and summary", "[metrics]") {
  Rng rng(6);
  std::vector<Signal> ref = {RandomSignal(rng, 4, 300), RandomSignal(rng, 4, 300)};
  const Signal mix = ref[0] + ref[1];
  std::vector<Signal> est = {ref[1] + 0.1 * RandomSignal(rng, 4, 300), ref[0] + 0.1 * RandomSignal(rng, 4, 300)};
  auto rec = Evaluate(mix, est, ref, 16);
  CHECK(rec.permutation == std::vector<int>{1, 0});
  CHECK_THAT(rec.si_sdri, WithinAbs(rec.si_sdr - rec.mixture_si_sdr, 1e-12));
  CHECK(rec.si_isr > rec.mixture_si_isr);
  CHECK(rec.isr_taps == 16);
  auto s = Summarize({1.0, 2.0, 3.0});
  CHECK(s.mean == 2.0);
  CHECK_THAT(s.stddev, WithinAbs(std::sqrt(2.0 / 3.0), 1e-15));
}

TEST_CASE("PIT loss value and gradient", "[metrics][grad]") {
  Rng rng(7);
  const std::size_t j = 2, m = 4, n = 40;
  std::vector<double> ref(j * m * n), est0(j * m * n);
  for (auto& v : ref) v = rng.Normal();
  for (std::size_t i = 0; i < est0.size(); ++i) est0[i] = rng.Normal();

  ad::ParamRegistry<double> reg;
  reg.Add("est", {j, m, n}).data.assign(est0.begin(), est0.end());
  ad::Tape<double> tape;
  std::vector<int> perm;
  auto loss = NegSiSdrPitLoss(tape.Param("est", reg.Get("est")), ref, &perm);

  std::vector<Signal> es, rs;
  for (std::size_t s = 0; s < j; ++s) {
    es.push_back(Eigen::Map<const Eigen::Matrix<double, -1, -1, Eigen::RowMajor>>(est0.data() + s * m * n, m, n));
    rs.push_back(Eigen::Map<const Eigen::Matrix<double, -1, -1, Eigen::RowMajor>>(ref.data() + s * m * n, m, n));
  }
  const auto res = MultichannelSiSdr(es, rs);
  CHECK_THAT(loss.value()[0], WithinAbs(-res.mean_db, 1e-10));
  CHECK(perm == res.alignment.permutation);

  auto report = ad::GradCheck(
      [&](ad::Tape<double>& t, ad::ParamRegistry<double>& p) {
        return NegSiSdrPitLoss(t.Param("est", p.Get("est")), ref);
      },
      reg, 1e-6, 1e-6);
  INFO(report.ToString());
  CHECK(report.pass());

  ad::Tape<double> t2;
  CHECK_THROWS_AS(NegSiSdrPitLoss(t2.Constant({j, m, n}, est0), std::vector<double>(10)), ad::ShapeError);
}
