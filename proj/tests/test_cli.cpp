#include "curvpca_cli.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = curvpca::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  return rows;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> f;
  std::stringstream ss(s);
  std::string x;
  while (std::getline(ss, x, ',')) f.push_back(x);
  if (!s.empty() && s.back() == ',') f.emplace_back();
  return f;
}

// Value of column `name` in data row `row` (row 0 is the CSV header).
std::string column(const std::string& text, const std::string& name, std::size_t row) {
  const auto rows = data_lines(text);
  const auto header = split(rows.at(0));
  const auto values = split(rows.at(row));
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return values.at(i);
  throw std::runtime_error("no column " + name);
}

std::string temp_path(const std::string& name) { return ::testing::TempDir() + "curvpca_" + name; }

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

} // namespace

TEST(Cli, GenSphereCap) {
  const auto r = run({"gen", "--model", "sphere", "--dim", "3", "--radius", "1", "--eps", "0.2", "--count", "1000",
                      "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(data_lines(r.out).size(), 1000u);
  EXPECT_EQ(r.out.rfind("# dim=3", 0), 0u);
  EXPECT_NE(r.out.find("# seed=7"), std::string::npos);
  std::istringstream is(r.out);
  const auto cloud = curvpca::read_cloud(is);
  EXPECT_EQ(cloud.size(), 1000u);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Eigen::VectorXd X = cloud.points.col(static_cast<Eigen::Index>(i));
    EXPECT_NEAR(X.norm(), 1.0, 1e-12);
  }
}

TEST(Cli, GenIsDeterministic) {
  const std::string path = temp_path("det.csv");
  std::vector<std::string> contents;
  for (int t = 0; t < 2; ++t) {
    ASSERT_EQ(run({"gen", "--model", "graph", "--kappas", "2,1", "--eps", "0.1", "--count", "500", "--output", path}).code, 0);
    contents.push_back(slurp(path));
  }
  EXPECT_EQ(contents[0], contents[1]);
  EXPECT_FALSE(contents[0].empty());
}

TEST(Cli, GenValidation) {
  const auto r = run({"gen", "--model", "graph", "--kappas", "2,1", "--count", "0"});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run({"gen", "--model", "torus"}).code, 2);
  EXPECT_EQ(run({"gen", "--model", "graph", "--kappas", "2,x"}).code, 2);
  EXPECT_EQ(run({"gen", "--model", "graph", "--kappas", "2,1", "--eps", "5"}).code, 2);
  EXPECT_EQ(run({"estimate", "--model", "sphere", "--eps", "0.1,0.2"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--version"}).code, 0);
}

TEST(Cli, EstimateSphereModel) {
  const auto r = run({"estimate", "--model", "sphere", "--dim", "3", "--radius", "1", "--domain", "patch", "--eps", "0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(std::stod(column(r.out, "H", 1)), 2.0, 0.25);
  EXPECT_EQ(column(r.out, "status", 1), "ok");
}

TEST(Cli, EstimateComponentSweepShrinks) {
  const auto r = run({"estimate", "--model", "graph", "--kappas", "2,1", "--domain", "component", "--eps", "0.2,0.1,0.05"});
  ASSERT_EQ(r.code, 0) << r.err;
  double prev = 1e300;
  for (std::size_t row = 1; row <= 3; ++row) {
    const double e = std::abs(std::stod(column(r.out, "kappa_error1", row)));
    EXPECT_LT(e, prev);
    prev = e;
  }
}

TEST(Cli, EstimateFlatCloudFlagsSingularity) {
  const std::string path = temp_path("plane.csv");
  ASSERT_EQ(run({"gen", "--model", "plane", "--dim", "3", "--eps", "0.3", "--count", "3000", "--output", path}).code, 0);
  const auto r = run({"estimate", "--input", path, "--eps", "0.3,0.2"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (std::size_t row = 1; row <= 2; ++row) {
    EXPECT_EQ(column(r.out, "h_singular", row), "1");
    EXPECT_NEAR(std::stod(column(r.out, "H", row)), 0.0, 1e-12);
  }
  EXPECT_EQ(run({"estimate", "--input", path, "--eps", "0.3", "--strict"}).code, 3);
}

TEST(Cli, EstimateTooFewNeighboursIsRowLevel) {
  const std::string path = temp_path("sparse.csv");
  ASSERT_EQ(run({"gen", "--model", "sphere", "--eps", "0.3", "--count", "50", "--output", path}).code, 0);
  const auto r = run({"estimate", "--input", path, "--center", "0,0,-1", "--eps", "0.3,0.001"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(data_lines(r.out).size(), 3u);
  EXPECT_NE(column(r.out, "status", 2), "ok");
  EXPECT_EQ(run({"estimate", "--input", path, "--center", "0,0,-1", "--eps", "0.3,0.001", "--strict"}).code, 3);
}

TEST(Cli, SweepFooter) {
  const auto two = run({"sweep", "--model", "sphere", "--quantity", "volume", "--eps", "0.2,0.1"});
  ASSERT_EQ(two.code, 0) << two.err;
  EXPECT_EQ(two.out.find("# slope,"), std::string::npos);
  EXPECT_NE(two.out.find("refused"), std::string::npos);
  // Cap area is exact: error column at roundoff.
  for (std::size_t row = 1; row <= 2; ++row) EXPECT_LT(std::stod(column(two.out, "abs_error", row)), 1e-14);

  const auto three = run({"sweep", "--model", "graph", "--kappas", "2,1", "--quantity", "volume", "--eps-grid", "0.2",
                          "--levels", "4"});
  ASSERT_EQ(three.code, 0) << three.err;
  const auto pos = three.out.find("# slope,");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_GE(std::stod(three.out.substr(pos + 8)), 4.5);
  EXPECT_NE(three.out.find("# truncation_orders"), std::string::npos);
}

TEST(Cli, RiemannCodim2) {
  const auto r = run({"riemann", "--model", "codim2", "--eps", "0.05", "--count", "100000"});
  ASSERT_EQ(r.code, 0) << r.err;
  bool found = false;
  for (const auto& line : data_lines(r.out)) {
    const auto f = split(line);
    if (f.size() == 7 && f[1] == "riemann" && f[2] == "1" && f[3] == "2" && f[4] == "1" && f[5] == "2") {
      EXPECT_NEAR(std::stod(f[6]), 2.0, 0.3);
      found = true;
    }
  }
  EXPECT_TRUE(found);
  EXPECT_NE(r.out.find("frame=estimated"), std::string::npos);
}

TEST(Cli, RiemannPlanarCloud) {
  const std::string path = temp_path("plane4.csv");
  {
    std::ofstream f(path);
    f << "# dim=4\n";
    curvpca::Rng rng(2);
    for (int i = 0; i < 2000; ++i) f << rng.uniform(-0.1, 0.1) << ',' << rng.uniform(-0.1, 0.1) << ",0,0\n";
  }
  const auto r = run({"riemann", "--input", path, "--eps", "0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& line : data_lines(r.out)) {
    const auto f = split(line);
    if (f.size() == 7 && f[0] != "eps") EXPECT_NEAR(std::stod(f[6]), 0.0, 1e-9) << line;
  }
}

TEST(Cli, ConfigPrecedence) {
  const std::string cfg = temp_path("run.ini");
  {
    std::ofstream f(cfg);
    f << "model = sphere\ncount = 7\nseed = 3\neps = 0.1\n";
  }
  const auto from_file = run({"gen", "--config", cfg});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_EQ(data_lines(from_file.out).size(), 7u);
  EXPECT_NE(from_file.out.find("# seed=3"), std::string::npos);

  const auto flagged = run({"gen", "--config", cfg, "--count", "4"});
  ASSERT_EQ(flagged.code, 0) << flagged.err;
  EXPECT_EQ(data_lines(flagged.out).size(), 4u);

  const auto defaults = run({"gen", "--model", "sphere", "--eps", "0.1"});
  EXPECT_EQ(data_lines(defaults.out).size(), 1000u);
}

TEST(Cli, OutputIndependentOfJobs) {
  const auto a = run({"estimate", "--model", "graph", "--kappas", "2,1", "--eps", "0.1", "--jobs", "1"});
  const auto b = run({"estimate", "--model", "graph", "--kappas", "2,1", "--eps", "0.1", "--jobs", "3"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(data_lines(a.out), data_lines(b.out));
}
