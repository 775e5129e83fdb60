#include <instant/spectrum.hpp>

#include <gtest/gtest.h>

using namespace instant;

TEST(Spectrum, MinimalPhases) {
  const OrbitSpectrum s2 = minimal_periodic_spectrum(2);
  EXPECT_DOUBLE_EQ(s2.phases[0], 0.0);
  EXPECT_DOUBLE_EQ(s2.phases[1], 3.0 * pi);
  const OrbitSpectrum s4 = minimal_periodic_spectrum(4);
  const double expected[] = {0.0, 1.25, 0.5, 1.75};
  for (int k = 0; k < 4; ++k) EXPECT_DOUBLE_EQ(s4.phases[static_cast<std::size_t>(k)] / two_pi, expected[k]);
  for (std::uint64_t p = 2; p <= 64; p += 2) {
    const OrbitSpectrum s = minimal_periodic_spectrum(p);
    EXPECT_NEAR(s.total_weight(), 1.0, 1e-12);
    for (std::uint64_t k = 0; k < p; ++k) {
      EXPECT_DOUBLE_EQ(s.weights[k], 1.0 / static_cast<double>(p));
      const double r = std::remainder(s.phases[k] - two_pi * static_cast<double>(k) / static_cast<double>(p), two_pi);
      EXPECT_NEAR(r, 0.0, 1e-12);
    }
  }
}

TEST(Spectrum, OddPeriodRejected) {
  EXPECT_THROW(minimal_periodic_spectrum(7), PreconditionError);
  EXPECT_THROW(minimal_periodic_spectrum(0), PreconditionError);
  EXPECT_THROW(halfstep_profile_periodic(5), PreconditionError);
}

TEST(Spectrum, OverlapExamples) {
  EXPECT_LT(std::abs(overlap_at(minimal_periodic_spectrum(6), 0.0) - 1.0), 1e-15);
  EXPECT_LT(std::abs(overlap_at(minimal_periodic_spectrum(4), 1.0)), 1e-15);
  const complex half = overlap_at(minimal_periodic_spectrum(2), 0.5);
  EXPECT_NEAR(half.real(), 0.5, 1e-15);
  EXPECT_NEAR(half.imag(), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(half), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_THROW(overlap_at(OrbitSpectrum::aperiodic(), 0.5), UnsupportedError);
}

TEST(Spectrum, OverlapBoundedByOne) {
  for (std::uint64_t p : {2u, 6u, 32u, 100u})
    for (int i = 0; i <= 400; ++i)
      EXPECT_LE(std::abs(overlap_at(minimal_periodic_spectrum(p), 0.0137 * i)), 1.0 + 1e-12);
}

TEST(Spectrum, KroneckerDeltaOnIntegers) {
  for (std::uint64_t p = 2; p <= 128; p += 2) {
    const OrbitSpectrum s = minimal_periodic_spectrum(p);
    for (std::int64_t k = -static_cast<std::int64_t>(p); k <= 2 * static_cast<std::int64_t>(p); ++k) {
      const complex v = overlap_at(s, static_cast<double>(k));
      if (k % static_cast<std::int64_t>(p) == 0) EXPECT_NEAR(std::abs(v - 1.0), 0.0, 1e-10);
      else EXPECT_LT(std::abs(v), 1e-10) << "p=" << p << " k=" << k;
    }
  }
}

// Frozen brute-force values of the closed form at p = 8.
TEST(Profile, EightFrozen) {
  const AmplitudeProfile a = halfstep_profile_periodic(8);
  const double expected[] = {0.01624322077963405,  0.01624322077963405, 0.0226009795651826,
                             0.05062232513818024,  0.4105334745170023,  0.4105334745170033,
                             0.050622325138181413, 0.022600979565182498};
  for (int j = 0; j < 8; ++j) EXPECT_NEAR(a.probability(j), expected[j], 1e-14) << j;
  EXPECT_NEAR(nu_of(a, {2, 6}), 0.8942902537373685, 1e-14);
  EXPECT_NEAR(a.probability(4) + a.probability(5), 0.8210669490340056, 1e-14);
  EXPECT_NEAR(a.probability(4) + a.probability(5), 8.0 / (pi * pi), 0.02);
}

TEST(Profile, TwoIsEvenSplit) {
  const AmplitudeProfile a = halfstep_profile_periodic(2);
  EXPECT_NEAR(a.probability(0), 0.5, 1e-15);
  EXPECT_NEAR(a.probability(1), 0.5, 1e-15);
}

TEST(Profile, PeakAtHundred) {
  const AmplitudeProfile a = halfstep_profile_periodic(100);
  EXPECT_NEAR(std::abs(a.at(50)), 0.6366459530600057, 1e-14);
  EXPECT_NEAR(std::abs(a.at(50)), minimal_peak(100), 1e-14);
  // j = 50 and j = 51 tie
  for (std::int64_t j = 0; j < 100; ++j) EXPECT_LE(std::abs(a.at(j)), std::abs(a.at(50)) + 1e-14);
}

TEST(Profile, NormalizedForAllEvenPeriods) {
  for (std::uint64_t p = 2; p <= 256; p += 2) {
    const AmplitudeProfile a = halfstep_profile_periodic(p);
    EXPECT_NEAR(a.captured, 1.0, 1e-10) << p;
    EXPECT_NEAR(nu_of(a, a.range()), 1.0, 1e-10);
  }
}

TEST(Profile, PeriodicInIndex) {
  // the closed form has period p in j; j = p reproduces j = 0
  const std::uint64_t p = 12;
  const OrbitSpectrum s = minimal_periodic_spectrum(p);
  const AmplitudeProfile a = halfstep_profile_periodic(p);
  EXPECT_LT(std::abs(overlap_at(s, static_cast<double>(p) - 0.5) - a.at(0)), 1e-12);
}

TEST(Profile, PeakConvergesQuadratically) {
  for (std::uint64_t p = 16; p <= 4096; p *= 2) {
    const double pd = static_cast<double>(p);
    EXPECT_LT(std::abs(minimal_peak(p) - 2.0 / pi), 1.0 / (pd * pd));
    EXPECT_NEAR(pd * std::sin(pi / (2.0 * pd)) * minimal_peak(p), 1.0, 1e-15);
  }
}

TEST(Profile, AperiodicTail) {
  const double frozen[] = {0.0020264067865739532, 0.0002026423503989072, 2.026423671619426e-05};
  int i = 0;
  for (std::uint64_t K : {100u, 1000u, 10000u}) {
    const AmplitudeProfile a = halfstep_profile_aperiodic(K);
    const double tail = 1.0 - a.captured;
    EXPECT_NEAR(tail, frozen[i++], 1e-12);
    const double ref = 2.0 / (pi * pi * static_cast<double>(K));
    EXPECT_LT(std::abs(tail - ref) / ref, 0.1);
    EXPECT_LE(a.captured, 1.0);
  }
  const AmplitudeProfile a = halfstep_profile_aperiodic(1000);
  EXPECT_EQ(a.first_index, -999);
  EXPECT_NEAR(std::abs(a.at(1)), 2.0 / pi, 1e-15);
  EXPECT_NEAR(a.captured, 0.9997973576496011, 1e-12);
  EXPECT_THROW(halfstep_profile_aperiodic(0), PreconditionError);
}

TEST(Profile, WindowRange) {
  const AmplitudeProfile a = halfstep_profile_periodic(8);
  EXPECT_EQ(nu_of(a, {3, 3}), 0.0);
  EXPECT_THROW(nu_of(a, {0, 9}), PreconditionError);
  EXPECT_THROW(nu_of(a, {-1, 4}), PreconditionError);
}

TEST(Eigenbasis, SmallCases) {
  const Eigen::MatrixXcd one = eigenbasis(1);
  EXPECT_EQ(one.rows(), 1);
  EXPECT_NEAR(std::abs(one(0, 0) - 1.0), 0.0, 1e-15);
  const Eigen::MatrixXcd two = eigenbasis(2);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(two(0, 0) - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(two(0, 1) - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(two(1, 0) - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(two(1, 1) + r), 0.0, 1e-15);
}

TEST(Eigenbasis, Unitary) {
  for (std::uint64_t p : {3u, 17u, 64u}) EXPECT_LT(unitarity_residual(eigenbasis(p)), 1e-10) << p;
}

// Rows of the basis are the computational states: one cycle of evolution
// (phases exp(-i lambda_k)) steps row j to row j - 1.
TEST(Eigenbasis, OneCycleStepsThroughTheRows) {
  const std::uint64_t p = 8;
  const OrbitSpectrum s = minimal_periodic_spectrum(p);
  const Eigen::MatrixXcd F = eigenbasis(p);
  for (Eigen::Index j = 0; j < 8; ++j) {
    Eigen::VectorXcd c = F.row(j).transpose();
    Eigen::VectorXcd next = F.row((j + 7) % 8).transpose();
    for (Eigen::Index k = 0; k < 8; ++k) c[k] *= std::polar(1.0, -s.phases[static_cast<std::size_t>(k)]);
    EXPECT_LT((c - next).norm(), 1e-12);
  }
}
