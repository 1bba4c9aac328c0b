#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nullsim/cli_io.hpp"
#include "nullsim/errors.hpp"

namespace cli = nullsim::cli;

namespace {

struct Common {
  std::optional<double> tol;
  std::optional<std::size_t> samples;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* sub, Common& c, bool with_format) {
  sub->add_option("--tol", c.tol, "Comparison tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--samples", c.samples, "Grid resolution (overrides the curve spec)");
  sub->add_option("--out", c.out, "Output file (default stdout)");
  if (with_format) sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

cli::RunConfig make_config(const Common& c) {
  cli::RunConfig cfg;
  if (c.tol) cfg.tol = *c.tol;
  cfg.samples = c.samples;
  cfg.format = c.format == "json" ? cli::OutputFormat::Json : cli::OutputFormat::Csv;
  return cfg;
}

template <typename F>
int with_output(const Common& c, F&& body) {
  if (c.out.empty()) return body(std::cout);
  std::ofstream file(c.out, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot open " << c.out << " for writing\n";
    return cli::kExitUsage;
  }
  return body(file);
}

std::optional<cli::CurveSpec> load(const std::string& path) {
  try {
    return cli::load_curve_spec(path);
  } catch (const nullsim::GeometryError& e) {
    std::cerr << "error: " << path << ": " << e.what() << '\n';
    return std::nullopt;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Similarity tools for null curves in Minkowski 3-space"};
  app.require_subcommand(1);

  Common common;
  std::string curve, curve_a, curve_b, mode, lambda;
  std::optional<double> anchor_a, anchor_b;
  std::vector<double> domain, origin;

  auto* frame = app.add_subcommand("frame", "Cartan frame, curvatures and total curvature along a curve");
  frame->add_option("--curve", curve, "Curve spec JSON")->required();
  add_common(frame, common, true);

  auto* check = app.add_subcommand("check", "Test two curves for similarity");
  check->add_option("--curve-a", curve_a, "First curve spec")->required();
  check->add_option("--curve-b", curve_b, "Second curve spec")->required();
  check->add_option("--mode", mode, "tangent, normal, binormal, ratio or bertrand")
      ->required()
      ->check(CLI::IsMember({"tangent", "normal", "binormal", "ratio", "bertrand"}));
  check->add_option("--anchor-a", anchor_a, "Anchor parameter on curve a");
  check->add_option("--anchor-b", anchor_b, "Anchor parameter on curve b");
  check->add_option("--lambda", lambda, "Explicit lambda profile (tangent mode)");
  add_common(check, common, false);

  auto* synth = app.add_subcommand("synthesize", "Build a curve similar to a given one");
  synth->add_option("--curve-a", curve_a, "Source curve spec")->required();
  synth->add_option("--lambda", lambda, "Scaling profile, e.g. 2, 2+sin, affine:a,b")->required();
  synth->add_option("--anchor-a", anchor_a, "Parameter of a matched to the start of b");
  synth->add_option("--domain", domain, "Parameter domain of b")->expected(2);
  synth->add_option("--origin", origin, "Position of b at the start of its domain")->expected(3);
  add_common(synth, common, true);

  auto* family = app.add_subcommand("family", "Closure of a curve family under a similarity");
  family->add_option("--curve", curve, "Family curve spec")->required();
  family->add_option("--lambda", lambda, "Scaling profile")->required();
  add_common(family, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  const cli::RunConfig config = make_config(common);

  if (frame->parsed()) {
    const auto spec = load(curve);
    if (!spec) return cli::kExitUsage;
    return with_output(common, [&](std::ostream& out) { return cli::run_frame(*spec, config, out, std::cerr); });
  }
  if (check->parsed()) {
    const auto a = load(curve_a);
    const auto b = load(curve_b);
    if (!a || !b) return cli::kExitUsage;
    cli::CheckRequest req{mode, anchor_a, anchor_b, std::nullopt};
    if (!lambda.empty()) req.lambda = lambda;
    return with_output(common, [&](std::ostream& out) { return cli::run_check(*a, *b, req, config, out, std::cerr); });
  }
  if (synth->parsed()) {
    const auto a = load(curve_a);
    if (!a) return cli::kExitUsage;
    cli::SynthesizeRequest req{lambda, std::nullopt, anchor_a, std::nullopt};
    if (!domain.empty()) req.domain = nullsim::Interval{domain[0], domain[1]};
    if (!origin.empty()) req.origin = nullsim::Vec3{origin[0], origin[1], origin[2]};
    return with_output(common,
                       [&](std::ostream& out) { return cli::run_synthesize(*a, req, config, out, std::cerr); });
  }
  const auto spec = load(curve);
  if (!spec) return cli::kExitUsage;
  return with_output(common, [&](std::ostream& out) { return cli::run_family(*spec, lambda, config, out, std::cerr); });
}
