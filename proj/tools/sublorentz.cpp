// Command-line front end: integrate scenarios, sample geodesic spheres and
// nonholonomic wavefronts, analyze the field structure at a point, and run
// the verification suites.
//
// Exit codes: 0 success, 1 verification failure, 2 input error,
// 3 numerical divergence, 4 I/O error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sublorentz/errors.hpp"
#include "sublorentz/export.hpp"
#include "sublorentz/fields.hpp"
#include "sublorentz/geodesic_engine.hpp"
#include "sublorentz/magnetic_analytic.hpp"
#include "sublorentz/nonholonomy.hpp"
#include "sublorentz/scenario.hpp"
#include "sublorentz/verify.hpp"

namespace {

using namespace sublorentz;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitIo = 4;

struct GridOption {
  int alpha_count = 256;
  int p_count = 256;
};

GridOption parse_grid(const std::string& text) {
  GridOption g;
  const auto x = text.find('x');
  if (x == std::string::npos)
    throw SpecError("grid must look like NxM, got '" + text + "'");
  try {
    g.alpha_count = std::stoi(text.substr(0, x));
    g.p_count = std::stoi(text.substr(x + 1));
  } catch (const std::exception&) {
    throw SpecError("grid must look like NxM, got '" + text + "'");
  }
  if (g.alpha_count < 2 || g.p_count < 2)
    throw SpecError("grid must be at least 2x2");
  return g;
}

void emit_cloud(const PointCloud& cloud, const std::string& out_path,
                const std::string& format, bool svg) {
  if (format == "json") {
    write_text_file(out_path, cloud_json(cloud));
  } else if (format == "csv") {
    write_cloud_csv(out_path, cloud);
  } else {
    throw SpecError("unknown format '" + format + "' (csv or json)");
  }
  if (svg) {
    const std::filesystem::path base(out_path);
    std::filesystem::path p23 = base, p24 = base;
    p23.replace_extension();
    p24.replace_extension();
    write_cloud_svg_pair(p23.string() + "_x2x3.svg", p24.string() + "_x2x4.svg",
                         cloud);
  }
}

int cmd_integrate(const std::string& scenario_path,
                  const std::vector<std::string>& overrides,
                  const std::string& out_path, const std::string& format) {
  const Scenario sc = load_scenario_file(scenario_path, overrides);
  const Trajectory traj =
      integrate(sc.dist, sc.particle, sc.initial, sc.integrator);

  if (format == "json")
    write_text_file(out_path, trajectory_json(traj, {sc.raw.begin(), sc.raw.end()}));
  else
    write_trajectory_csv(out_path, traj);

  const auto& last = traj.back();
  const double pn0 = traj.front().pseudonorm;
  double max_drift = 0.0, max_defect = 0.0;
  for (const auto& s : traj.samples) {
    max_drift = std::max(max_drift, std::abs(s.pseudonorm - pn0));
    max_defect = std::max(max_defect, std::abs(s.horizontality_defect));
  }
  std::printf("samples: %zu  (t = 0 .. %s)\n", traj.samples.size(),
              format_g17(last.t).c_str());
  std::printf("final x: %s %s %s %s %s\n",
              format_g17(last.state.position.base[0]).c_str(),
              format_g17(last.state.position.base[1]).c_str(),
              format_g17(last.state.position.base[2]).c_str(),
              format_g17(last.state.position.base[3]).c_str(),
              format_g17(last.state.position.fiber).c_str());
  std::printf("final u: %s %s %s %s\n",
              format_g17(last.state.velocity[0]).c_str(),
              format_g17(last.state.velocity[1]).c_str(),
              format_g17(last.state.velocity[2]).c_str(),
              format_g17(last.state.velocity[3]).c_str());
  std::printf("max pseudonorm drift:      %.3e\n", max_drift);
  std::printf("max horizontality defect:  %.3e\n", max_defect);
  if (const auto mom = momentum_covector(sc.dist, sc.particle, last.state)) {
    std::printf("final covector momenta:    %s %s %s %s  (p4 = charge = %s)\n",
                format_g17((*mom)[0]).c_str(), format_g17((*mom)[1]).c_str(),
                format_g17((*mom)[2]).c_str(), format_g17((*mom)[3]).c_str(),
                format_g17(sc.particle.charge).c_str());
  }
  std::printf("wrote %s\n", out_path.c_str());
  return kExitOk;
}

int cmd_cloud(CloudKind kind, double s, double phi, double p_min, double p_max,
              const GridOption& grid, const std::string& out_path,
              const std::string& format, bool svg) {
  SphereSpec spec;
  spec.radius_s = s;
  spec.phi = phi;
  spec.p_min = p_min;
  spec.p_max = p_max;
  spec.alpha_count = grid.alpha_count;
  spec.p_count = grid.p_count;
  const PointCloud cloud = kind == CloudKind::sphere ? sphere_sample(spec)
                                                     : wavefront_sample(spec);
  emit_cloud(cloud, out_path, format, svg);
  std::printf("%s: %zu points (alpha %d x p %d), s = %s, phi = %s\n",
              kind == CloudKind::sphere ? "sphere" : "wavefront",
              cloud.points.size(), spec.alpha_count, spec.p_count,
              format_g17(s).c_str(), format_g17(phi).c_str());
  std::printf("wrote %s\n", out_path.c_str());
  return kExitOk;
}

int cmd_verify(const std::string& suite) {
  const auto results = run_verify_suite(suite);
  std::size_t failed = 0;
  std::printf("%-32s %-6s %14s %14s  %s\n", "check", "status", "measured",
              "threshold", "relation");
  for (const auto& r : results) {
    if (!r.pass) ++failed;
    std::printf("%-32s %-6s %14.6e %14.6e  %s\n", r.name.c_str(),
                r.pass ? "pass" : "FAIL", r.measured, r.threshold,
                r.relation.c_str());
  }
  std::printf("%zu/%zu checks passed\n", results.size() - failed,
              results.size());
  if (failed) {
    for (const auto& r : results)
      if (!r.pass)
        std::fprintf(stderr, "failed: %s (measured %.6e, wanted %s %.6e)\n",
                     r.name.c_str(), r.measured, r.relation.c_str(),
                     r.threshold);
    return kExitVerifyFail;
  }
  return kExitOk;
}

int cmd_analyze(const std::string& scenario_path,
                const std::vector<std::string>& overrides) {
  const Scenario sc = load_scenario_file(scenario_path, overrides);
  const Vec4& x = sc.initial.position.base;
  const FaradayTensor far = faraday(sc.dist.potential, x);
  const AbnormalKernel kernel = abnormal_kernel(far);
  const GrowthVector gv = growth_vector(sc.dist.potential, x);
  const BoxExponents be = box_exponents(gv);

  std::printf("analysis at x = (%s, %s, %s, %s)\n", format_g17(x[0]).c_str(),
              format_g17(x[1]).c_str(), format_g17(x[2]).c_str(),
              format_g17(x[3]).c_str());
  std::printf("F =\n");
  for (int i = 0; i < 4; ++i)
    std::printf("  [%12.5e %12.5e %12.5e %12.5e]\n", far.f[i][0], far.f[i][1],
                far.f[i][2], far.f[i][3]);
  std::printf("det F = %s\n", format_g17(det4(far.f)).c_str());
  std::printf("rank F = %d\n", kernel.rank_f);
  std::printf("abnormal kernel dimension = %zu\n", kernel.basis.size());
  for (const auto& v : kernel.basis)
    std::printf("  kernel vector: [%12.5e %12.5e %12.5e %12.5e]\n", v[0], v[1],
                v[2], v[3]);
  std::printf("growth vector = (");
  for (std::size_t i = 0; i < gv.dims.size(); ++i)
    std::printf("%s%d", i ? ", " : "", gv.dims[i]);
  std::printf("), degree of nonholonomy = %d\n", gv.degree);
  std::printf("box exponents = (");
  for (std::size_t i = 0; i < be.phi.size(); ++i)
    std::printf("%s%d", i ? ", " : "", be.phi[i]);
  std::printf(")\n");
  const double pn = pseudonorm(sc.dist.metric, x, sc.initial.velocity);
  std::printf("initial pseudonorm = %s (%s)\n", format_g17(pn).c_str(),
              to_string(cone_membership(sc.dist.metric, x, sc.initial.velocity))
                  .c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sublorentz - horizontal geodesics of the 4-potential distribution on "
      "a 5-manifold: integration, geodesic spheres, nonholonomic wavefronts, "
      "field analysis, verification"};
  app.require_subcommand(1);

  std::string scenario_path, out_path = "out.csv", format = "csv";
  std::string grid_text = "256x256", suite = "all";
  std::vector<std::string> overrides;
  double s = 1.0, phi = 1.0, p_min = 0.0, p_max = 0.0;
  bool svg = false;

  auto* integrate_cmd =
      app.add_subcommand("integrate", "integrate a scenario file");
  integrate_cmd->add_option("--scenario", scenario_path, "scenario file")
      ->required();
  integrate_cmd->add_option("--out", out_path, "output path");
  integrate_cmd->add_option("--format", format, "csv or json");
  integrate_cmd->add_option("--set", overrides, "override key=value");

  auto* sphere_cmd = app.add_subcommand(
      "sphere", "sample a geodesic sphere (optimal arcs, |p|*s <= 2pi)");
  auto* wavefront_cmd = app.add_subcommand(
      "wavefront", "sample the nonholonomic wavefront (no optimality cut)");
  for (auto* cmd : {sphere_cmd, wavefront_cmd}) {
    cmd->add_option("--s", s, "geodesic length / sphere radius");
    cmd->add_option("--phi", phi, "magnetic field strength");
    cmd->add_option("--p-min", p_min, "lower cyclotron rate")->required();
    cmd->add_option("--p-max", p_max, "upper cyclotron rate")->required();
    cmd->add_option("--grid", grid_text, "alpha x p sample counts (NxM)");
    cmd->add_option("--out", out_path, "output path");
    cmd->add_option("--format", format, "csv or json");
    cmd->add_flag("--svg", svg, "also write (x2,x3) and (x2,x4) projections");
  }

  auto* verify_cmd =
      app.add_subcommand("verify", "run a verification suite");
  verify_cmd->add_option("suite", suite,
                         "conservation|oracle|gauge|abnormal|asymptotics|"
                         "nonholonomy|all");

  auto* analyze_cmd = app.add_subcommand(
      "analyze", "field structure at the scenario's initial point");
  analyze_cmd->add_option("--scenario", scenario_path, "scenario file")
      ->required();
  analyze_cmd->add_option("--set", overrides, "override key=value");

  CLI11_PARSE(app, argc, argv);

  try {
    if (integrate_cmd->parsed())
      return cmd_integrate(scenario_path, overrides, out_path, format);
    if (sphere_cmd->parsed())
      return cmd_cloud(CloudKind::sphere, s, phi, p_min, p_max,
                       parse_grid(grid_text), out_path, format, svg);
    if (wavefront_cmd->parsed())
      return cmd_cloud(CloudKind::wavefront, s, phi, p_min, p_max,
                       parse_grid(grid_text), out_path, format, svg);
    if (verify_cmd->parsed()) return cmd_verify(suite);
    if (analyze_cmd->parsed()) return cmd_analyze(scenario_path, overrides);
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDivergence;
  } catch (const SpecError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const EvaluationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const MetricError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const Error& e) {
    // Remaining library errors are I/O (export) failures.
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  return kExitOk;
}
