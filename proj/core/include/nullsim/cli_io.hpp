#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nullsim/families.hpp"
#include "nullsim/frame.hpp"
#include "nullsim/similarity.hpp"

namespace nullsim::cli {

/// Exit-code contract of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDegenerate = 2;
inline constexpr int kExitCriterionFail = 3;

enum class OutputFormat { Csv, Json };

struct RunConfig {
  double eps_null = 1e-6;
  double eps_frame = 1e-5;
  double eps_kappa = kDefaultEpsKappa;
  double tol = 1e-5;
  std::optional<std::size_t> samples;  ///< overrides the curve spec
  OutputFormat format = OutputFormat::Csv;

  /// Throws ValidationError unless tolerances are positive and samples ≥ 5.
  void validate() const;
};

enum class CurveKind { Builtin, Samples, Frenet, Family };

struct CurveSpec {
  CurveKind kind = CurveKind::Builtin;
  std::string name;
  Interval domain{0.0, 6.283185307179586};
  std::size_t samples = 2001;
  // builtin "geodesic"
  Vec3 point{};
  Vec3 direction{1.0, 1.0, 0.0};
  // samples
  std::vector<double> sample_s;
  std::vector<Vec3> sample_points;
  // frenet
  ScalarFunction kappa = ScalarFunction::constant(-1.0);
  ScalarFunction tau = ScalarFunction::constant(-0.5);
  FrameSample initial = helix1_initial_frame();
  Vec3 origin{};
  // family
  FamilySpec family;
};

/// Parses a curve-spec JSON document. Relative CSV paths of "samples" specs
/// resolve against `base_dir`. Throws GeometryError with ParseError,
/// UnknownBuiltin or ValidationError.
CurveSpec parse_curve_spec(std::string_view text, const std::filesystem::path& base_dir = {});
CurveSpec load_curve_spec(const std::filesystem::path& file);

/// Constants ("2", "0.5") and named profiles: "2+sin" (2 + sin s),
/// "affine:a,b" (a + b·s), "sin:a,b" (a + b·sin s).
ScalarFunction parse_profile(std::string_view text);

/// Reads s,x1,x2,x3 columns (by header name) from CSV text.
void read_samples_csv(std::string_view text, std::vector<double>& s, std::vector<Vec3>& points);

struct ResolvedCurve {
  NullCurve curve;
  ParameterGrid grid;
};

ResolvedCurve resolve_curve(const CurveSpec& spec, const RunConfig& config);

/// Fixed CSV header of `frame` output.
const std::vector<std::string>& frame_columns();
/// `synthesize` output: frame columns plus s_a, lambda and the two
/// curvature-scaling residuals.
const std::vector<std::string>& synthesize_columns();

/// Formats a double with 17 significant digits.
std::string format_number(double v);

int run_frame(const CurveSpec& spec, const RunConfig& config, std::ostream& out, std::ostream& err);

struct CheckRequest {
  std::string mode;  ///< tangent, normal, binormal, ratio, bertrand
  std::optional<double> anchor_a;
  std::optional<double> anchor_b;
  std::optional<std::string> lambda;  ///< tangent mode: explicit λ profile
};

int run_check(const CurveSpec& a, const CurveSpec& b, const CheckRequest& request, const RunConfig& config,
              std::ostream& out, std::ostream& err);

struct SynthesizeRequest {
  std::string lambda;
  std::optional<Interval> domain;  ///< s_b domain; default spans a's domain
  std::optional<double> anchor_a;  ///< s_a0, default a's domain start
  std::optional<Vec3> origin;      ///< b(s_b0), default a(s_a0)
};

int run_synthesize(const CurveSpec& a, const SynthesizeRequest& request, const RunConfig& config, std::ostream& out,
                   std::ostream& err);

/// Closure check of a family spec under λ; JSON verdict.
int run_family(const CurveSpec& spec, const std::string& lambda, const RunConfig& config, std::ostream& out,
               std::ostream& err);

}  // namespace nullsim::cli
