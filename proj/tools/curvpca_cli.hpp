#ifndef CURVPCA_TOOLS_CLI_HPP
#define CURVPCA_TOOLS_CLI_HPP

// Command-line front end: gen, invariants, estimate, sweep, riemann.
// All output is CSV with '#' header comments.

#include "curvpca/curvpca.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace curvpca::cli {

inline constexpr const char* version = "1.0.0";

enum ExitCode { exit_ok = 0, exit_validation = 2, exit_numerical = 3 };

struct Options {
  std::string command;
  std::string input;
  std::string output;
  std::string model;
  std::string kappas;
  std::string cubic;
  std::string quartic;
  double radius = 1.0;
  int dim = 3;
  bool dim_set = false;
  std::string eps;
  double eps_grid = 0.2;
  int levels = 4;
  std::string domain = "patch";
  std::uint64_t seed = 1;
  int jobs = 0;
  bool strict = false;
  std::size_t count = 1000;
  std::string quantity = "volume";
  int index = 0;
  std::optional<double> area;
  std::string center;
  std::optional<int> manifold_dim;
  bool volume_assisted = false;
  bool qmc = false;
  std::size_t mc_samples = 1u << 20;
};

inline std::vector<double> parse_doubles(const std::string& s, const char* what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t"), e = tok.find_last_not_of(" \t");
    if (b == std::string::npos) throw validation_error(std::string("empty entry in --") + what);
    tok = tok.substr(b, e - b + 1);
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw validation_error(std::string("bad number '") + tok + "' in --" + what);
    }
    if (!std::isfinite(v.back())) throw validation_error(std::string("non-finite value in --") + what);
  }
  return v;
}

/// Scales: explicit --eps list, else eps_grid 2^{-j}, j < levels.
inline std::vector<double> scales(const Options& o) {
  std::vector<double> e = o.eps.empty() ? geometric_grid(o.eps_grid, o.levels) : parse_doubles(o.eps, "eps");
  if (e.empty()) throw validation_error("no scales given");
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!(e[i] > 0.0)) throw validation_error("scales must be positive");
    if (i > 0 && !(e[i] < e[i - 1])) throw validation_error("scales must be strictly decreasing");
  }
  return e;
}

inline HypersurfaceModel build_model(const Options& o) {
  if (o.model == "sphere") {
    return HypersurfaceModel::sphere(o.dim, o.radius);
  }
  if (o.model == "graph" || o.model == "plane") {
    Eigen::VectorXd k;
    if (o.model == "plane") {
      if (o.dim < 2) throw validation_error("--dim must be at least 2");
      k = Eigen::VectorXd::Zero(o.dim - 1);
    } else {
      if (o.kappas.empty()) throw validation_error("graph model needs --kappas");
      const auto kv = parse_doubles(o.kappas, "kappas");
      k = Eigen::Map<const Eigen::VectorXd>(kv.data(), static_cast<Eigen::Index>(kv.size()));
      if (o.dim_set && o.dim != k.size() + 1)
        throw validation_error("--dim disagrees with the number of --kappas");
    }
    std::vector<double> c3, c4;
    if (!o.cubic.empty()) c3 = parse_doubles(o.cubic, "cubic");
    if (!o.quartic.empty()) c4 = parse_doubles(o.quartic, "quartic");
    return HypersurfaceModel::graph(k, c3, c4);
  }
  if (o.model.empty()) throw validation_error("no --model or --input given");
  throw validation_error("unknown hypersurface model '" + o.model + "' (sphere, graph, plane)");
}

inline std::string fmt(double v) { return format_double(v); }

inline double vector_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double c = std::abs(a.dot(b));
  const double s = (a - a.dot(b) * b).norm();
  return std::atan2(s, c);
}

struct Context {
  Options opt;
  CLI::App* app = nullptr;
  std::ostream* out = nullptr;

  void header(std::ostream& os) const {
    os << "# curvpca " << version << ' ' << opt.command << '\n';
    std::stringstream cfg(app->config_to_str(true, false));
    std::string line;
    while (std::getline(cfg, line))
      if (!line.empty()) os << "# " << line << '\n';
  }
};

inline QuadratureConfig quadrature_config(const Options& o) {
  QuadratureConfig cfg;
  cfg.jobs = o.jobs;
  cfg.seed = o.seed;
  cfg.mc_samples = o.mc_samples;
  return cfg;
}

inline IntegralInvariants model_invariants(const HypersurfaceModel& m, double eps, const Options& o) {
  const QuadratureConfig cfg = quadrature_config(o);
  const Eigen::VectorXd p = m.origin();
  if (o.domain == "patch") return patch_invariants(m, p, eps, cfg);
  if (o.domain == "component")
    return o.qmc ? component_invariants_qmc(m, p, eps, cfg) : component_invariants(m, p, eps, cfg);
  if (o.domain == "shell") return shell_invariants(m, p, eps, cfg);
  throw validation_error("unknown --domain '" + o.domain + "' (patch, component, shell)");
}

inline AsymptoticInvariants model_asymptotics(const HypersurfaceModel& m, double eps, const Options& o) {
  const Eigen::VectorXd k = exact_curvatures(m, m.origin()).kappas;
  if (o.domain == "patch") return patch_asymptotics(m.n(), eps, k);
  if (o.domain == "component") return component_asymptotics(m.n(), eps, k);
  if (o.domain == "shell") return shell_asymptotics(m.n(), eps, k);
  throw validation_error("unknown --domain '" + o.domain + "' (patch, component, shell)");
}

/// Eigenvalues of C listed along the model frame: tangent axes first, then
/// the normal; each axis takes the unused eigenvector it is best aligned with.
inline Eigen::VectorXd frame_eigenvalues(const Eigen::MatrixXd& C, const Eigen::MatrixXd& frame) {
  const EigenDecomposition ed = eig_sym(C);
  const Eigen::Index d = C.rows();
  std::vector<bool> used(d, false);
  Eigen::VectorXd out(d);
  // Normal first: it has the clearest gap.
  std::vector<Eigen::Index> axes;
  axes.push_back(d - 1);
  for (Eigen::Index a = 0; a + 1 < d; ++a) axes.push_back(a);
  for (Eigen::Index a : axes) {
    Eigen::Index best = -1;
    double bc = -1.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (used[i]) continue;
      const double c = std::abs(ed.eigenvectors.col(i).dot(frame.col(a)));
      if (c > bc) {
        bc = c;
        best = i;
      }
    }
    used[best] = true;
    out(a) = ed.eigenvalues(best);
  }
  return out;
}

inline std::ostream& sink(Context& ctx, std::unique_ptr<std::ofstream>& file) {
  if (ctx.opt.output.empty()) return *ctx.out;
  file = std::make_unique<std::ofstream>(ctx.opt.output);
  if (!*file) throw validation_error("cannot write " + ctx.opt.output);
  return *file;
}

inline PointCloud load_input(const Options& o) { return read_cloud_file(o.input); }

inline Eigen::VectorXd cloud_center(const Options& o, int dim) {
  if (o.center.empty()) return Eigen::VectorXd::Zero(dim);
  const auto c = parse_doubles(o.center, "center");
  if (static_cast<int>(c.size()) != dim) throw validation_error("--center has wrong dimension");
  return Eigen::Map<const Eigen::VectorXd>(c.data(), dim);
}

// ---- gen -----------------------------------------------------------------

inline int cmd_gen(Context& ctx) {
  const Options& o = ctx.opt;
  if (o.count < 1) throw validation_error("--count must be at least 1");
  const std::vector<double> e = scales(ctx.opt);
  if (o.eps.empty()) throw validation_error("gen needs --eps");
  if (e.size() != 1) throw validation_error("gen takes a single --eps");
  PointCloud cloud;
  if (o.model == "codim2") {
    cloud = sample_submanifold_patch(SubmanifoldModel::codim2_example(), e[0], o.count, o.seed);
  } else {
    const HypersurfaceModel m = build_model(o);
    cloud = sample_patch(m, m.origin(), e[0], o.count, o.seed);
  }
  std::unique_ptr<std::ofstream> file;
  std::ostream& os = sink(ctx, file);
  std::stringstream hdr;
  ctx.header(hdr);
  std::vector<std::string> comments;
  std::string line;
  while (std::getline(hdr, line)) comments.push_back(line.substr(2));
  write_cloud(os, cloud, comments);
  return exit_ok;
}

// ---- invariants ----------------------------------------------------------

inline int cmd_invariants(Context& ctx) {
  const Options& o = ctx.opt;
  const std::vector<double> es = scales(o);
  std::unique_ptr<std::ofstream> file;
  std::ostream& os = sink(ctx, file);
  ctx.header(os);
  std::optional<HypersurfaceModel> model;
  std::optional<PointCloud> cloud;
  int d = 0;
  if (!o.input.empty()) {
    cloud = load_input(o);
    d = cloud->dim;
  } else {
    model = build_model(o);
    d = model->ambient_dim();
    const auto a = model_asymptotics(*model, es[0], o);
    os << "# truncation_orders volume=" << a.truncation_order.volume << " barycenter=" << a.truncation_order.barycenter
       << " eigenvalues=" << a.truncation_order.eigenvalues << '\n';
  }
  os << "eps,domain,volume";
  for (int i = 0; i < d; ++i) os << ",s" << i + 1;
  for (int i = 0; i < d; ++i) os << ",lambda" << i + 1;
  os << ",status\n";
  bool failed = false;
  for (double eps : es) {
    os << fmt(eps) << ',';
    try {
      IntegralInvariants inv;
      if (cloud) {
        inv = cloud_patch_invariants(*cloud, cloud_center(o, d), eps, o.area);
      } else {
        inv = model_invariants(*model, eps, o);
      }
      const EigenDecomposition ed = eig_sym(inv.raw_covariance());
      os << to_string(inv.domain_kind) << ',' << fmt(inv.volume);
      for (int i = 0; i < d; ++i) os << ',' << fmt(inv.barycenter(i));
      for (int i = 0; i < d; ++i) os << ',' << fmt(ed.eigenvalues(i));
      os << ",ok\n";
    } catch (const numerical_error& ex) {
      failed = true;
      os << (cloud ? "discrete" : o.domain) << ",nan";
      for (int i = 0; i < 2 * d; ++i) os << ",nan";
      os << ",\"" << ex.what() << "\"\n";
    } catch (const validation_error& ex) {
      if (!cloud) throw;
      failed = true;  // too few neighbours at this scale
      os << "discrete,nan";
      for (int i = 0; i < 2 * d; ++i) os << ",nan";
      os << ",\"" << ex.what() << "\"\n";
    }
  }
  return failed && o.strict ? exit_numerical : exit_ok;
}

// ---- estimate ------------------------------------------------------------

inline int cmd_estimate(Context& ctx) {
  const Options& o = ctx.opt;
  const std::vector<double> es = scales(o);
  std::unique_ptr<std::ofstream> file;
  std::ostream& os = sink(ctx, file);
  ctx.header(os);
  std::optional<HypersurfaceModel> model;
  std::optional<PointCloud> cloud;
  std::optional<CurvatureOracle> truth;
  int n = 0;
  if (!o.input.empty()) {
    cloud = load_input(o);
    n = cloud->dim - 1;
    if (n < 1) throw validation_error("cloud must have dimension at least 2");
  } else {
    if (o.domain != "patch" && o.domain != "component")
      throw validation_error("estimate supports --domain patch or component");
    model = build_model(o);
    n = model->n();
    truth = exact_curvatures(*model, model->origin());
  }
  DescriptorOptions dopt;
  dopt.volume_assisted = o.volume_assisted;

  // True principal pairs sorted descending; directions are meaningless at ties.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  bool true_umbilic = false;
  if (truth) {
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return truth->kappas(a) > truth->kappas(b); });
    for (int i = 0; i + 1 < n; ++i)
      if (std::abs(truth->kappas(order[i]) - truth->kappas(order[i + 1])) <= 1e-12) true_umbilic = true;
  }

  os << "eps,source";
  for (int i = 0; i < n; ++i) os << ",kappa" << i + 1;
  os << ",H,scalar";
  if (truth) {
    for (int i = 0; i < n; ++i) os << ",kappa_error" << i + 1;
    os << ",normal_angle";
    for (int i = 0; i < n; ++i) os << ",direction_angle" << i + 1;
  }
  os << ",umbilic,h_singular,status\n";
  bool failed = false;
  const std::string nan = "nan";
  for (double eps : es) {
    os << fmt(eps) << ',';
    try {
      IntegralInvariants inv;
      if (cloud) {
        inv = cloud_patch_invariants(*cloud, cloud_center(o, n + 1), eps, o.area);
      } else {
        inv = model_invariants(*model, eps, o);
      }
      const CurvatureEstimate e = estimate_curvature(inv, n, eps, dopt);
      os << to_string(e.source);
      for (int i = 0; i < n; ++i) os << ',' << (e.has_kappas() ? fmt(e.kappas(i)) : nan);
      os << ',' << fmt(e.H) << ',' << fmt(e.scalar_curv);
      if (truth) {
        // Patch estimates orient the normal towards the barycenter; compare in that orientation.
        const double sg = e.normal.dot(truth->normal) < 0.0 ? -1.0 : 1.0;
        for (int i = 0; i < n; ++i)
          os << ',' << (e.has_kappas() ? fmt(std::abs(sg * e.kappas(sg > 0 ? i : n - 1 - i) - truth->kappas(order[i]))) : nan);
        os << ',' << fmt(vector_angle(e.normal, truth->normal));
        for (int i = 0; i < n; ++i) {
          const int j = sg > 0 ? i : n - 1 - i;
          os << ',' << (true_umbilic || !e.has_kappas() ? nan : fmt(vector_angle(e.principal_directions.col(j), truth->directions.col(order[i]))));
        }
      }
      os << ',' << (e.umbilic ? 1 : 0) << ',' << (e.h_singular ? 1 : 0) << ",ok\n";
      if (e.h_singular) failed = true;
    } catch (const numerical_error& ex) {
      failed = true;
      os << "none";
      const int cols = n + 2 + (truth ? 2 * n + 1 : 0);
      for (int i = 0; i < cols; ++i) os << ",nan";
      os << ",0,0,\"" << ex.what() << "\"\n";
    } catch (const validation_error& ex) {
      if (!cloud) throw;
      failed = true;
      os << "none";
      for (int i = 0; i < n + 2; ++i) os << ",nan";
      os << ",0,0,\"" << ex.what() << "\"\n";
    }
  }
  return failed && o.strict ? exit_numerical : exit_ok;
}

// ---- sweep ---------------------------------------------------------------

inline int cmd_sweep(Context& ctx) {
  const Options& o = ctx.opt;
  const std::vector<double> es = scales(o);
  if (!o.input.empty()) throw validation_error("sweep needs a model (an exact oracle), not --input");
  const HypersurfaceModel m = build_model(o);
  const int n = m.n();
  const CurvatureOracle truth = exact_curvatures(m, m.origin());
  const std::string& q = o.quantity;
  const bool descriptor = q == "kappa" || q == "H" || q == "scalar";
  if (!(q == "volume" || q == "barycenter" || q == "eigenvalue" || descriptor))
    throw validation_error("unknown --quantity '" + q + "' (volume, barycenter, eigenvalue, kappa, H, scalar)");
  if ((q == "eigenvalue" && (o.index < 0 || o.index > n)) || (q == "kappa" && (o.index < 0 || o.index >= n)))
    throw validation_error("--index out of range");
  if (descriptor && o.domain == "shell") throw validation_error("no curvature descriptor for the shell domain");

  std::unique_ptr<std::ofstream> file;
  std::ostream& os = sink(ctx, file);
  ctx.header(os);
  const auto a0 = model_asymptotics(m, es[0], o);
  os << "# truncation_orders volume=" << a0.truncation_order.volume << " barycenter=" << a0.truncation_order.barycenter
     << " eigenvalues=" << a0.truncation_order.eigenvalues << '\n';
  os << "eps,numerical,asymptotic,abs_error\n";
  std::vector<double> xs, ys;
  bool failed = false;
  const Eigen::MatrixXd frame = m.frame();
  for (double eps : es) {
    try {
      const IntegralInvariants inv = model_invariants(m, eps, o);
      const AsymptoticInvariants a = model_asymptotics(m, eps, o);
      double num = 0.0, pred = 0.0;
      if (q == "volume") {
        num = inv.volume;
        pred = a.volume;
      } else if (q == "barycenter") {
        num = (inv.barycenter - inv.center).dot(m.normal());
        pred = a.barycenter_normal;
      } else if (q == "eigenvalue") {
        const Eigen::VectorXd lam = frame_eigenvalues(inv.raw_covariance(), frame);
        num = lam(o.index);
        pred = a.eigenvalues(o.index);
      } else {
        DescriptorOptions dopt;
        dopt.volume_assisted = o.volume_assisted;
        const CurvatureEstimate e = estimate_curvature(inv, n, eps, dopt);
        const double sg = e.normal.dot(truth.normal) < 0.0 ? -1.0 : 1.0;
        if (q == "H") {
          num = sg * e.H;
          pred = truth.H;
        } else if (q == "scalar") {
          num = e.scalar_curv;
          pred = truth.scalar_curv;
        } else {
          if (!e.has_kappas()) throw numerical_error("H ~ 0: no principal curvatures");
          Eigen::VectorXd ks = truth.kappas;
          std::sort(ks.data(), ks.data() + n, std::greater<double>());
          num = sg * e.kappas(sg > 0 ? o.index : n - 1 - o.index);
          pred = ks(o.index);
        }
      }
      const double err = std::abs(num - pred);
      os << fmt(eps) << ',' << fmt(num) << ',' << fmt(pred) << ',' << fmt(err) << '\n';
      // Errors at the roundoff floor carry no order information.
      if (err > 1e-12 * std::max(std::abs(pred), std::abs(num))) {
        xs.push_back(eps);
        ys.push_back(err);
      }
    } catch (const numerical_error& ex) {
      failed = true;
      os << fmt(eps) << ",nan,nan,nan\n# error at eps=" << fmt(eps) << ": " << ex.what() << '\n';
    }
  }
  if (es.size() < 3) {
    os << "# slope fit refused: fewer than 3 scales\n";
  } else if (xs.size() < 3) {
    os << "# slope,exact (errors at roundoff)\n";
  } else {
    os << "# slope," << fmt(fit_loglog_slope(xs, ys).slope) << '\n';
  }
  return failed && o.strict ? exit_numerical : exit_ok;
}

// ---- riemann -------------------------------------------------------------

inline int cmd_riemann(Context& ctx) {
  const Options& o = ctx.opt;
  const std::vector<double> es = scales(o);
  std::optional<PointCloud> cloud;
  if (!o.input.empty()) {
    cloud = load_input(o);
  } else if (o.model != "codim2") {
    throw validation_error("riemann needs --input or --model codim2");
  }
  std::unique_ptr<std::ofstream> file;
  std::ostream& os = sink(ctx, file);
  ctx.header(os);
  os << "eps,kind,a,b,c,d,value\n";
  bool failed = false;
  for (double eps : es) {
    try {
      const PointCloud pc =
          cloud ? *cloud : sample_submanifold_patch(SubmanifoldModel::codim2_example(), eps, o.count, o.seed);
      SubmanifoldOptions sopt;
      sopt.n = o.manifold_dim;
      const SubmanifoldReport rep = analyze_submanifold(pc, cloud_center(o, pc.dim), eps, sopt);
      const SubmanifoldCurvature& sc = rep.curvature;
      const std::string e = fmt(eps) + ',';
      os << "# eps=" << fmt(eps) << " frame=" << (rep.frame.estimated ? "estimated" : "injected") << " n=" << sc.n
         << " k=" << sc.k << " riemann_source="
         << (sc.source == RiemannSource::second_fundamental_form ? "second_fundamental_form" : "scalar_only") << '\n';
      if (sc.has_second_fundamental_form)
        for (int a = 0; a < sc.n; ++a)
          for (int b = a; b < sc.n; ++b)
            for (int j = 0; j < sc.k; ++j)
              os << e << "II," << a + 1 << ',' << b + 1 << ',' << j + 1 << ",," << fmt(sc.II(a, b, j)) << '\n';
      for (int j = 0; j < sc.k; ++j) os << e << "H," << j + 1 << ",,,," << fmt(sc.mean_curvature_vector(j)) << '\n';
      for (int a = 0; a < sc.n; ++a)
        for (int b = a + 1; b < sc.n; ++b)
          for (int c = a; c < sc.n; ++c)
            for (int d = c + 1; d < sc.n; ++d)
              if (c > a || d >= b)
                os << e << "riemann," << a + 1 << ',' << b + 1 << ',' << c + 1 << ',' << d + 1 << ','
                   << fmt(sc.R(a, b, c, d)) << '\n';
      for (int a = 0; a < sc.n; ++a)
        for (int b = a; b < sc.n; ++b) os << e << "ricci," << a + 1 << ',' << b + 1 << ",,," << fmt(sc.ricci(a, b)) << '\n';
      os << e << "scalar,,,,," << fmt(sc.scalar) << '\n';
      os << e << "symmetry_residual,,,,," << fmt(riemann_symmetry_residual(sc)) << '\n';
    } catch (const numerical_error& ex) {
      failed = true;
      os << "# error at eps=" << fmt(eps) << ": " << ex.what() << '\n';
    } catch (const validation_error& ex) {
      if (!cloud) throw;
      failed = true;
      os << "# error at eps=" << fmt(eps) << ": " << ex.what() << '\n';
    }
  }
  return failed && o.strict ? exit_numerical : exit_ok;
}

// ---- entry ---------------------------------------------------------------

/// Runs one command; args exclude the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Context ctx;
  Options& o = ctx.opt;
  CLI::App app{"Curvature descriptors from integral invariants at scale"};
  ctx.app = &app;
  ctx.out = &out;
  app.set_config("--config", "", "flat key = value file; flags override it");
  app.set_version_flag("--version", version);
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--input", o.input, "point-cloud CSV");
  app.add_option("--output", o.output, "output file (default stdout)");
  app.add_option("--model", o.model, "sphere | graph | plane | codim2");
  app.add_option("--kappas", o.kappas, "comma-separated principal curvatures of a graph model");
  app.add_option("--cubic", o.cubic, "row-major cubic coefficient tensor (n^3 values)");
  app.add_option("--quartic", o.quartic, "row-major quartic coefficient tensor (n^4 values)");
  app.add_option("--radius", o.radius, "sphere radius")->capture_default_str();
  auto* dim = app.add_option("--dim", o.dim, "ambient dimension")->capture_default_str();
  app.add_option("--eps", o.eps, "comma-separated scales, strictly decreasing");
  app.add_option("--eps-grid", o.eps_grid, "first scale of the grid eps0 2^-j")->capture_default_str();
  app.add_option("--levels", o.levels, "number of grid scales")->capture_default_str();
  app.add_option("--domain", o.domain, "patch | component | shell")->capture_default_str();
  app.add_option("--seed", o.seed, "random seed")->capture_default_str();
  app.add_option("--jobs", o.jobs, "worker threads (0: all cores)")->capture_default_str();
  app.add_flag("--strict", o.strict, "exit 3 on numerical failures and singular rows");
  app.add_option("--count", o.count, "points to sample")->capture_default_str();
  app.add_option("--quantity", o.quantity, "sweep: volume | barycenter | eigenvalue | kappa | H | scalar")
      ->capture_default_str();
  app.add_option("--index", o.index, "sweep: eigenvalue or kappa index")->capture_default_str();
  app.add_option("--area", o.area, "area estimate for cloud patches");
  app.add_option("--center", o.center, "comma-separated centre for cloud input (default origin)");
  app.add_option("--n", o.manifold_dim, "riemann: manifold dimension (detected when absent)");
  app.add_flag("--volume-assisted", o.volume_assisted, "component: use the volume-assisted kappa formula");
  app.add_flag("--qmc", o.qmc, "component: quasi-Monte Carlo instead of quadrature");
  app.add_option("--mc-samples", o.mc_samples, "quasi-Monte Carlo samples")->capture_default_str();

  app.add_subcommand("gen", "sample a synthetic point cloud");
  app.add_subcommand("invariants", "volume, barycenter and covariance spectrum per scale");
  app.add_subcommand("estimate", "curvature descriptors per scale");
  app.add_subcommand("sweep", "numerical vs asymptotic convergence table with log-log slope");
  app.add_subcommand("riemann", "codimension-k second fundamental form and Riemann tensor");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForVersion& e) {
    out << version << '\n';
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  }
  o.dim_set = dim->count() > 0;
  o.command = app.get_subcommands().front()->get_name();

  try {
    if (o.command == "gen") return cmd_gen(ctx);
    if (o.command == "invariants") return cmd_invariants(ctx);
    if (o.command == "estimate") return cmd_estimate(ctx);
    if (o.command == "sweep") return cmd_sweep(ctx);
    if (o.command == "riemann") return cmd_riemann(ctx);
  } catch (const chart_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const validation_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const numerical_error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  }
  return exit_validation;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

} // namespace curvpca::cli

#endif // CURVPCA_TOOLS_CLI_HPP
