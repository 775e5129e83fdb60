#include <instant/random_impl.hpp>

#include <gtest/gtest.h>

using namespace instant;

TEST(Densities, SupportAndMoments) {
  for (const DensitySpec& d : {DensitySpec::uniform(), DensitySpec::two_point(), DensitySpec::raised_cosine()}) {
    Rng rng(1);
    const std::uint64_t p = 64;
    const int reps = 4000;
    double s2 = 0.0;
    for (int i = 0; i < reps; ++i) {
      const YSample y = sample_y(p, d, rng);
      for (double v : y.y) {
        ASSERT_LE(std::abs(v), 1.0 / static_cast<double>(p) + 1e-15);
        s2 += v * v;
      }
    }
    const double n = static_cast<double>(reps * p);
    const double m2 = s2 / n * static_cast<double>(p * p);
    // var(z^2) <= m4 bounds the standard error
    EXPECT_LT(std::abs(m2 - d.m2), 4.0 * std::sqrt(d.m4 / n)) << d.name;
  }
}

TEST(Densities, RaisedCosineMoments) {
  const DensitySpec d = DensitySpec::raised_cosine();
  EXPECT_NEAR(d.m2, 0.1306909660486578, 1e-15);
  EXPECT_NEAR(d.m4, 0.04109883954307296, 1e-15);
  EXPECT_THROW(DensitySpec::by_name("gaussian"), PreconditionError);
  EXPECT_EQ(DensitySpec::by_name("two-point").m2, 1.0);
}

TEST(Yield, ZeroAllocationYieldsNothing) {
  YSample s;
  s.p = 16;
  s.y.assign(16, 0.0);
  EXPECT_EQ(nu_from_y(s, {0, 16}), 0.0);
  EXPECT_THROW(nu_from_y(s, {0, 17}), PreconditionError);
}

TEST(Yield, AlternatingAllocationIsTheMinimalProfile) {
  for (std::uint64_t p : {8u, 64u, 100u}) {
    const YSample s = alternating_y(p);
    const AmplitudeProfile a = halfstep_profile_periodic(p);
    for (std::int64_t j = 0; j < static_cast<std::int64_t>(p); ++j)
      EXPECT_LT(std::abs(amplitude_from_y(s, j) - a.at(j)), 1e-10) << p << " " << j;
    const IndexRange w = sqrt_window(p);
    EXPECT_NEAR(nu_from_y(s, w), nu_of(a, w), 1e-10);
  }
}

TEST(Yield, TransformMatchesDirectSum) {
  Rng rng(2);
  for (std::uint64_t p : {6u, 64u, 96u, 256u}) {
    YieldTransform t(p);
    const YSample s = sample_y(p, DensitySpec::uniform(), rng);
    const auto& a = t.amplitudes(s);
    for (std::int64_t j = 0; j < static_cast<std::int64_t>(p); ++j)
      EXPECT_LT(std::abs(a[static_cast<std::size_t>(j)] - amplitude_from_y(s, j)), 1e-13);
    const IndexRange w = sqrt_window(p);
    EXPECT_NEAR(t.nu(s, w), nu_from_y(s, w), 1e-13);
  }
  YieldTransform t(8);
  EXPECT_THROW(t.amplitudes(alternating_y(10)), PreconditionError);
}

TEST(Stats, MeanAtTwoFiftySix) {
  const StatsReport r = yield_experiment({256}, DensitySpec::uniform(), 20000, Rng(3));
  ASSERT_EQ(r.rows.size(), 1u);
  const StatsRow& row = r.rows[0];
  EXPECT_EQ(row.window_length, 240);
  EXPECT_DOUBLE_EQ(row.expected, 0.3125);
  EXPECT_LT(std::abs(row.mean - 0.3125), 3.0 * row.stderr_);
  EXPECT_TRUE(row.mean_ok);
}

TEST(Stats, PerIndexSecondMoment) {
  // E|a_j|^2 = m2 / p for every j
  const std::uint64_t p = 32;
  const int reps = 20000;
  YieldTransform t(p);
  Rng rng(4);
  std::vector<double> acc(p, 0.0);
  for (int i = 0; i < reps; ++i) {
    const auto& a = t.amplitudes(sample_y(p, DensitySpec::uniform(), rng));
    for (std::uint64_t j = 0; j < p; ++j) acc[j] += std::norm(a[j]);
  }
  for (std::uint64_t j = 0; j < p; ++j)
    EXPECT_NEAR(acc[j] / reps * static_cast<double>(p), 1.0 / 3.0, 0.02) << j;
}

TEST(Stats, TwoPointIsTighterAtLargePeriod) {
  const StatsReport u = yield_experiment({1024}, DensitySpec::uniform(), 2000, Rng(5));
  const StatsReport t = yield_experiment({1024}, DensitySpec::two_point(), 2000, Rng(5));
  EXPECT_LT(t.rows[0].var, u.rows[0].var);
}

TEST(Stats, VarianceScalesInverselyWithPeriod) {
  const StatsReport r = yield_experiment({64, 1024}, DensitySpec::uniform(), 4000, Rng(6));
  const double ratio = r.rows[0].var / r.rows[1].var;
  EXPECT_GT(ratio, 8.0);
  EXPECT_LT(ratio, 32.0);
  EXPECT_LT(r.var_p_ratio, 2.0);
}

TEST(Stats, SingleTrialHasNoVariance) {
  const StatsReport r = yield_experiment({64}, DensitySpec::uniform(), 1, Rng(7));
  EXPECT_FALSE(r.variance_defined);
  EXPECT_TRUE(std::isnan(r.rows[0].var));
  EXPECT_TRUE(std::isnan(r.c));
  EXPECT_FALSE(r.means_ok());
  EXPECT_THROW(yield_experiment({64}, DensitySpec::uniform(), 0, Rng(7)), PreconditionError);
  EXPECT_THROW(yield_experiment({63}, DensitySpec::uniform(), 5, Rng(7)), PreconditionError);
}

TEST(Stats, Reproducible) {
  const StatsReport a = yield_experiment({64, 128}, DensitySpec::raised_cosine(), 300, Rng(8));
  const StatsReport b = yield_experiment({64, 128}, DensitySpec::raised_cosine(), 300, Rng(8));
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(a.rows[i].mean, b.rows[i].mean);
    EXPECT_EQ(a.rows[i].var, b.rows[i].var);
  }
}

TEST(Continuous, ConstantAllocation) {
  const std::uint64_t N = 256;
  const ContinuousNu one = continuous_nu(std::vector<double>(N, 1.0));
  EXPECT_NEAR(one.direct, halfstep_profile_aperiodic(N).captured, 1e-10);
  EXPECT_NEAR(one.closed_form, 2.0, 1e-15);
  const ContinuousNu zero = continuous_nu(std::vector<double>(N, 0.0));
  EXPECT_EQ(zero.direct, 0.0);
  EXPECT_EQ(zero.closed_form, 0.0);
  EXPECT_THROW(continuous_nu(std::vector<double>(7, 1.0)), PreconditionError);
}

TEST(Continuous, DirectYieldStaysBelowOne) {
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    const ContinuousNu v = continuous_nu(128, DensitySpec::two_point(), rng);
    EXPECT_GE(v.direct, 0.0);
    EXPECT_LE(v.direct, 1.0 + 1e-12);
  }
}
