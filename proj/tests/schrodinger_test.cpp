#include <instant/rng.hpp>
#include <instant/schrodinger.hpp>

#include <gtest/gtest.h>

using namespace instant;

TEST(Grid, Geometry) {
  const Grid g(16, 4.0);
  EXPECT_DOUBLE_EQ(g.spacing(), 0.5);
  EXPECT_DOUBLE_EQ(g.x(0), -3.75);
  EXPECT_DOUBLE_EQ(g.x(15), 3.75);
  EXPECT_EQ(g.refined().cells, 32u);
  EXPECT_THROW(Grid(4, 1.0), PreconditionError);
  EXPECT_THROW(Grid(16, 0.0), PreconditionError);
}

TEST(Grid, FunctionsAreNormalized) {
  const Grid g(512, 8.0);
  for (const GridFunctionSet& s : {chirped_pair(g), identical_pair(g), width_pair(g)})
    for (std::size_t k = 0; k < s.functions.size(); ++k) EXPECT_NEAR(s.norm_squared(k), 1.0, 1e-10);
}

TEST(Obstruction, ChirpedPairIsCertified) {
  const ObstructionResult r = obstruction_certificate(chirped_pair(Grid(1024, 8.0)));
  EXPECT_TRUE(r.certificate);
  EXPECT_EQ(r.nullity, 1u);
  // continuum value: sigma = 1 Gaussian against its chirp gives sqrt(2)
  EXPECT_NEAR(std::abs(r.K), std::sqrt(2.0), 1e-3);
  EXPECT_NEAR(std::abs(r.coefficients[0]), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r.coefficients[0], -r.coefficients[1], 1e-12);
  EXPECT_LT(r.constraint_residual, 1e-12);
  EXPECT_GT(std::abs(r.K), 1e6 * r.tolerance);
}

TEST(Obstruction, KScalesWithWidth) {
  for (double sigma : {0.5, 1.0, 1.5}) {
    const ObstructionResult r = obstruction_certificate(chirped_pair(Grid(4096, 8.0), sigma));
    EXPECT_NEAR(std::abs(r.K), std::sqrt(2.0) * sigma * sigma, 5e-3 * sigma * sigma) << sigma;
  }
}

TEST(Obstruction, IdenticalPairIsNotCertified) {
  const ObstructionResult r = obstruction_certificate(identical_pair(Grid(1024, 8.0)));
  EXPECT_FALSE(r.certificate);
  EXPECT_LT(std::abs(r.K), 1e-12);
}

TEST(Obstruction, DifferentWidthsHaveNoConstraintSolution) {
  const ObstructionResult r = obstruction_certificate(width_pair(Grid(1024, 8.0)));
  EXPECT_FALSE(r.certificate);
  EXPECT_EQ(r.nullity, 0u);
}

TEST(Obstruction, PotentialCancels) {
  const Grid g(1024, 8.0);
  const GridFunctionSet s = chirped_pair(g);
  const ObstructionResult r = obstruction_certificate(s);
  const double h = g.spacing();
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(g.cells));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(-50.0, 50.0);
    double total = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
      const double pv = potential_form(s.functions[k], v, h);
      total += r.coefficients[static_cast<Eigen::Index>(k)] * pv;
      scale += std::abs(pv);
    }
    EXPECT_LT(std::abs(total), 1e-12 * scale);
  }
}

TEST(Obstruction, SecondOrderConvergence) {
  std::vector<double> K;
  for (std::size_t G : {512u, 1024u, 2048u, 4096u})
    K.push_back(std::abs(obstruction_certificate(chirped_pair(Grid(G, 8.0))).K));
  for (std::size_t i = 0; i + 2 < K.size(); ++i) {
    const double ratio = (K[i + 1] - K[i]) / (K[i + 2] - K[i + 1]);
    EXPECT_GT(ratio, 3.0);
    EXPECT_LT(ratio, 5.0);
  }
  EXPECT_NEAR(K[0], 1.4131781968, 1e-9);
  EXPECT_NEAR(K[3], 1.4141973781, 1e-9);
}

TEST(Obstruction, ExplicitTolerance) {
  const GridFunctionSet s = chirped_pair(Grid(256, 8.0));
  EXPECT_FALSE(obstruction_certificate(s, 10.0).certificate);
  EXPECT_TRUE(obstruction_certificate(s, 0.0).certificate);
  EXPECT_THROW(obstruction_certificate(GridFunctionSet(Grid(64, 8.0), {gaussian(Grid(64, 8.0), 1.0)})),
               PreconditionError);
}

TEST(GridCsv, RoundTrip) {
  const GridFunctionSet s = chirped_pair(Grid(256, 8.0));
  std::stringstream buf;
  write_grid_csv(buf, s);
  const GridFunctionSet back = read_grid_csv(buf);
  ASSERT_EQ(back.grid.cells, 256u);
  EXPECT_NEAR(back.grid.half_width, 8.0, 1e-12);
  ASSERT_EQ(back.functions.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_LT((back.functions[k] - s.functions[k]).norm(), 1e-12);
  EXPECT_NEAR(obstruction_certificate(back).K, obstruction_certificate(s).K, 1e-10);
}

TEST(GridCsv, MalformedInput) {
  auto parse = [](const std::string& text) {
    std::stringstream in(text);
    return read_grid_csv(in, "t.csv");
  };
  std::string rows;
  for (int i = 0; i < 8; ++i) rows += std::to_string(-3.5 + i) + ",1,0,1,0\n";
  EXPECT_NO_THROW(parse("x,re0,im0,re1,im1\n" + rows));
  EXPECT_THROW(parse("x,re0,im0\n" + rows.substr(0, 20)), PreconditionError);
  try {
    parse(rows + "4.5,1,0,abc,0\n");
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("line 9"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse(rows + "9.5,1,0,1,0\n"), PreconditionError);
  EXPECT_THROW(parse("0,1,0,1,0\n1,1,0,1,0\n"), PreconditionError);
  EXPECT_THROW(parse(rows + "4.5,1,0\n"), PreconditionError);
  EXPECT_THROW(load_grid_csv("/nonexistent/file.csv"), PreconditionError);
}
