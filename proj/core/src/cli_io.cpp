#include "nullsim/cli_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "nullsim/errors.hpp"
#include "nullsim/phi.hpp"

namespace nullsim::cli {

using json = nlohmann::json;

void RunConfig::validate() const {
  if (!(eps_null > 0.0) || !(eps_frame > 0.0) || !(eps_kappa > 0.0) || !(tol > 0.0))
    throw GeometryError(ErrorCode::ValidationError, "tolerances must be positive");
  if (samples && *samples < 5) throw GeometryError(ErrorCode::ValidationError, "resolution must be >= 5");
}

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw GeometryError(ErrorCode::ValidationError, msg); }

Vec3 to_vec3(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) invalid(std::string(what) + " must be an array of 3 numbers");
  for (const auto& x : j)
    if (!x.is_number()) invalid(std::string(what) + " must be an array of 3 numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

ScalarFunction to_profile(const json& j, const char* what) {
  if (j.is_number()) return ScalarFunction::constant(j.get<double>());
  if (j.is_string()) return parse_profile(j.get<std::string>());
  invalid(std::string(what) + " must be a number or a profile name");
}

FrameSample to_frame(const json& j, double default_s) {
  const double s = j.contains("s") ? j.at("s").get<double>() : default_s;
  if (!j.contains("alpha") || !j.contains("gamma")) invalid("initial frame needs alpha and gamma");
  return make_frame(s, to_vec3(j.at("alpha"), "initial.alpha"), to_vec3(j.at("gamma"), "initial.gamma"));
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) invalid("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::GeodesicDegeneracy:
    case ErrorCode::KappaVanishes:
    case ErrorCode::TauVanishes:
    case ErrorCode::SignChange:
      return kExitDegenerate;
    default:
      return kExitUsage;
  }
}

int report_error(const GeometryError& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  return exit_code_for(e.code());
}

json residuals_json(const std::vector<NamedResidual>& rs) {
  json j = json::object();
  for (const auto& r : rs) j[r.name] = r.value;
  return j;
}

json report_json(const SimilarityReport& r, const Anchor& anchor) {
  json j;
  j["criterion"] = std::string(to_string(r.criterion));
  j["verdict"] = r.passed ? "pass" : "fail";
  j["passed"] = r.passed;
  j["tol"] = r.tol;
  j["anchor"] = {{"s_a", anchor.s_a}, {"s_b", anchor.s_b}};
  j["max_vector_deviation"] = r.max_vector_deviation;
  j["max_scalar_deviation"] = r.max_scalar_deviation;
  j["residuals"] = residuals_json(r.residuals);
  j["lambda"] = {{"min", r.lambda.min}, {"max", r.lambda.max}, {"mean", r.lambda.mean}};
  j["matched_points"] = r.matched_points;
  if (r.ratio_equal) j["ratio_equal"] = *r.ratio_equal;
  if (r.frames_agree) j["frames_agree"] = *r.frames_agree;
  json diag = json::array();
  for (const auto& d : r.diagnostics) diag.push_back({{"s_b", d.s_b}, {"s_a", d.s_a}, {"deviation", d.deviation}});
  j["diagnostics"] = diag;
  return j;
}

void emit_table(const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows,
                OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Json) {
    json j;
    j["columns"] = columns;
    j["rows"] = rows;
    out << j.dump(1) << '\n';
    return;
  }
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

std::vector<double> frame_row(const NullCurve& curve, const FrameSample& f, double phi) {
  const Vec3 x = curve.position(f.s);
  return {f.s,         x.c1,         x.c2,         x.c3,         f.alpha.c1, f.alpha.c2,
          f.alpha.c3,  f.beta.c1,    f.beta.c2,    f.beta.c3,    f.gamma.c1, f.gamma.c2,
          f.gamma.c3,  f.kappa,      f.tau,        phi,          f.tau / f.kappa};
}

std::vector<double> phi_column(const FramedCurve& fc, const RunConfig& config, std::ostream& err) {
  try {
    return total_curvature(fc, std::nullopt, config.eps_kappa).phi();
  } catch (const GeometryError& e) {
    err << "warning: no total-curvature chart (" << e.what() << "); phi column is nan\n";
    return std::vector<double>(fc.size(), std::nan(""));
  }
}

FrameOptions frame_options(const RunConfig& config) {
  FrameOptions o;
  o.eps_null = config.eps_null;
  return o;
}

}  // namespace

ScalarFunction parse_profile(std::string_view text) {
  const std::string t(text);
  if (t == "2+sin") return ScalarFunction::sine(2.0, 1.0);
  auto parse_pair = [&](std::size_t prefix) {
    const std::string args = t.substr(prefix);
    const auto comma = args.find(',');
    if (comma == std::string::npos) invalid("profile '" + t + "' needs two comma-separated numbers");
    try {
      std::size_t used_a = 0, used_b = 0;
      const std::string sa = args.substr(0, comma), sb = args.substr(comma + 1);
      const double a = std::stod(sa, &used_a);
      const double b = std::stod(sb, &used_b);
      if (used_a != sa.size() || used_b != sb.size()) throw std::invalid_argument(t);
      return std::pair{a, b};
    } catch (const std::exception&) {
      invalid("malformed profile '" + t + "'");
    }
  };
  if (t.rfind("affine:", 0) == 0) {
    const auto [a, b] = parse_pair(7);
    return ScalarFunction::affine(a, b);
  }
  if (t.rfind("sin:", 0) == 0) {
    const auto [a, b] = parse_pair(4);
    return ScalarFunction::sine(a, b);
  }
  try {
    std::size_t used = 0;
    const double c = std::stod(t, &used);
    if (used == t.size() && std::isfinite(c)) return ScalarFunction::constant(c);
  } catch (const std::exception&) {
  }
  invalid("unknown profile '" + t + "' (expected a number, '2+sin', 'affine:a,b' or 'sin:a,b')");
}

void read_samples_csv(std::string_view text, std::vector<double>& s, std::vector<Vec3>& points) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) invalid("empty samples CSV");
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    invalid("samples CSV lacks column '" + name + "'");
  };
  const std::size_t is = col("s"), ix1 = col("x1"), ix2 = col("x2"), ix3 = col("x3");
  s.clear();
  points.clear();
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<double> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        cells.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw GeometryError(ErrorCode::ParseError, "bad number '" + cell + "' on CSV line " + std::to_string(row));
      }
    }
    if (cells.size() != header.size())
      throw GeometryError(ErrorCode::ParseError, "wrong column count on CSV line " + std::to_string(row));
    s.push_back(cells[is]);
    points.push_back({cells[ix1], cells[ix2], cells[ix3]});
  }
}

CurveSpec parse_curve_spec(std::string_view text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw GeometryError(ErrorCode::ParseError, "malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw GeometryError(ErrorCode::ParseError, "curve spec must be a JSON object");

  try {
    CurveSpec spec;
    if (!j.contains("kind")) invalid("missing 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    spec.name = j.value("name", std::string{});
    if (j.contains("domain")) {
      const auto& d = j.at("domain");
      if (!d.is_array() || d.size() != 2) invalid("domain must be [t0, t1]");
      spec.domain = {d[0].get<double>(), d[1].get<double>()};
      if (!(spec.domain.hi > spec.domain.lo)) invalid("domain must satisfy t0 < t1");
    }
    if (j.contains("samples")) {
      const auto n = j.at("samples").get<long long>();
      if (n < 5) invalid("samples must be >= 5");
      spec.samples = static_cast<std::size_t>(n);
    }
    const json params = j.value("params", json::object());

    if (kind == "builtin") {
      spec.kind = CurveKind::Builtin;
      if (spec.name == "geodesic") {
        if (params.contains("point")) spec.point = to_vec3(params.at("point"), "params.point");
        if (params.contains("direction")) spec.direction = to_vec3(params.at("direction"), "params.direction");
      } else if (spec.name != "helix1") {
        throw GeometryError(ErrorCode::UnknownBuiltin, "unknown builtin curve '" + spec.name + "'");
      }
    } else if (kind == "samples") {
      spec.kind = CurveKind::Samples;
      if (j.contains("csv")) {
        std::filesystem::path p = j.at("csv").get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        read_samples_csv(read_file(p), spec.sample_s, spec.sample_points);
      } else {
        if (!j.contains("s") || !j.contains("points")) invalid("samples spec needs 'csv' or 's' + 'points'");
        spec.sample_s = j.at("s").get<std::vector<double>>();
        for (const auto& p : j.at("points")) spec.sample_points.push_back(to_vec3(p, "points[i]"));
      }
      if (spec.sample_s.size() < 5) invalid("samples spec needs >= 5 samples");
      if (spec.sample_s.size() != spec.sample_points.size()) invalid("s and points differ in length");
      spec.domain = {spec.sample_s.front(), spec.sample_s.back()};
      spec.samples = spec.sample_s.size();
    } else if (kind == "frenet") {
      spec.kind = CurveKind::Frenet;
      if (!j.contains("kappa") || !j.contains("tau")) invalid("frenet spec needs 'kappa' and 'tau'");
      spec.kappa = to_profile(j.at("kappa"), "kappa");
      spec.tau = to_profile(j.at("tau"), "tau");
      spec.initial = j.contains("initial") ? to_frame(j.at("initial"), spec.domain.lo) : helix1_initial_frame();
      if (!j.contains("initial") || !j.at("initial").contains("s")) spec.initial.s = spec.domain.lo;
      if (j.contains("origin")) spec.origin = to_vec3(j.at("origin"), "origin");
    } else if (kind == "family") {
      spec.kind = CurveKind::Family;
      FamilySpec& f = spec.family;
      if (spec.name == "helix") {
        f.kind = FamilyKind::Helix;
        f.kappa0 = params.value("kappa", -1.0);
        f.tau0 = params.value("tau", -0.5);
      } else if (spec.name == "geodesic") {
        f.kind = FamilyKind::Geodesic;
        if (params.contains("point")) f.point = to_vec3(params.at("point"), "params.point");
        if (params.contains("direction")) f.direction = to_vec3(params.at("direction"), "params.direction");
      } else if (spec.name == "torsion_free") {
        f.kind = FamilyKind::TorsionFree;
        f.kappa = params.contains("kappa") ? to_profile(params.at("kappa"), "params.kappa")
                                           : ScalarFunction::constant(1.0);
      } else {
        throw GeometryError(ErrorCode::UnknownBuiltin, "unknown family '" + spec.name + "'");
      }
      f.domain = spec.domain;
      f.samples = spec.samples;
      f.initial = j.contains("initial") ? to_frame(j.at("initial"), spec.domain.lo) : helix1_initial_frame();
      if (!j.contains("initial") || !j.at("initial").contains("s")) f.initial.s = spec.domain.lo;
    } else {
      invalid("unknown kind '" + kind + "'");
    }
    return spec;
  } catch (const json::exception& e) {
    throw GeometryError(ErrorCode::ValidationError, std::string("bad field type: ") + e.what());
  }
}

CurveSpec load_curve_spec(const std::filesystem::path& file) {
  return parse_curve_spec(read_file(file), file.parent_path());
}

ResolvedCurve resolve_curve(const CurveSpec& spec, const RunConfig& config) {
  const std::size_t n = config.samples.value_or(spec.samples);
  ResolvedCurve r;
  switch (spec.kind) {
    case CurveKind::Builtin:
      r.curve = spec.name == "geodesic" ? make_null_geodesic(spec.point, spec.direction, spec.domain)
                                        : builtin_helix1(spec.domain);
      r.grid = ParameterGrid::uniform(spec.domain, n);
      break;
    case CurveKind::Samples:
      r.grid = ParameterGrid(spec.sample_s);
      r.curve = NullCurve::sampled("samples", r.grid, spec.sample_points);
      break;
    case CurveKind::Frenet: {
      r.grid = ParameterGrid::uniform(spec.domain, n);
      FrenetOptions opt;
      opt.origin = spec.origin;
      opt.eps_kappa = config.eps_kappa;
      opt.frame = frame_options(config);
      r.curve = integrate_frenet(spec.kappa, spec.tau, spec.initial, r.grid, opt).source();
      break;
    }
    case CurveKind::Family: {
      FamilySpec f = spec.family;
      f.samples = n;
      r.curve = make_family_member(f).curve;
      r.grid = ParameterGrid::uniform(f.domain, n);
      break;
    }
  }
  const auto nullity = nullity_check(r.curve, r.grid, config.eps_null);
  if (!nullity.passed) {
    std::ostringstream msg;
    msg << "curve is not null: max |<a',a'>| = " << nullity.max_residual << " at s=" << nullity.worst_s;
    throw GeometryError(ErrorCode::ValidationError, msg.str(), nullity.worst_s);
  }
  return r;
}

const std::vector<std::string>& frame_columns() {
  static const std::vector<std::string> cols{"s",      "x1",     "x2",     "x3",     "alpha1", "alpha2",
                                             "alpha3", "beta1",  "beta2",  "beta3",  "gamma1", "gamma2",
                                             "gamma3", "kappa",  "tau",    "phi",    "f"};
  return cols;
}

const std::vector<std::string>& synthesize_columns() {
  static const std::vector<std::string> cols = [] {
    auto c = frame_columns();
    c.insert(c.end(), {"s_a", "lambda", "kappa_scaling_residual", "tau_scaling_residual"});
    return c;
  }();
  return cols;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run_frame(const CurveSpec& spec, const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    const auto rc = resolve_curve(spec, config);
    const FramedCurve fc = frame_curve(rc.curve, rc.grid, frame_options(config));
    const auto phi = phi_column(fc, config, err);
    std::vector<std::vector<double>> rows;
    rows.reserve(fc.size());
    for (std::size_t i = 0; i < fc.size(); ++i) rows.push_back(frame_row(rc.curve, fc[i], phi[i]));
    emit_table(frame_columns(), rows, config.format, out);
    return kExitOk;
  } catch (const GeometryError& e) {
    return report_error(e, err);
  }
}

int run_check(const CurveSpec& a, const CurveSpec& b, const CheckRequest& request, const RunConfig& config,
              std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    const std::string& mode = request.mode;
    if (mode != "tangent" && mode != "normal" && mode != "binormal" && mode != "ratio" && mode != "bertrand")
      invalid("unknown mode '" + mode + "'");
    if (!request.anchor_a || !request.anchor_b)
      throw GeometryError(ErrorCode::AnchorRequired, "--anchor-a and --anchor-b are required");
    const Anchor anchor{*request.anchor_a, *request.anchor_b};

    const auto ra = resolve_curve(a, config);
    const auto rb = resolve_curve(b, config);
    const FramedCurve fa = frame_curve(ra.curve, ra.grid, frame_options(config));
    const FramedCurve fb = frame_curve(rb.curve, rb.grid, frame_options(config));
    SimilarityOptions opt;
    opt.tol = config.tol;
    opt.eps_kappa = config.eps_kappa;

    json j;
    bool passed = false;
    if (mode == "tangent") {
      const VariableTransformation t =
          request.lambda ? VariableTransformation::from_lambda(parse_profile(*request.lambda), fb.grid(), anchor)
                         : normal_criterion(fa, fb, anchor, opt).transformation;
      const auto r = check_tangent_similarity(fa, fb, t, config.tol);
      j = report_json(r, anchor);
      passed = r.passed;
    } else if (mode == "normal") {
      const auto r = normal_criterion(fa, fb, anchor, opt);
      j = report_json(r.report, anchor);
      passed = r.report.passed;
    } else if (mode == "binormal") {
      const auto r = binormal_criterion(fa, fb, anchor, opt);
      j = report_json(r.report, anchor);
      passed = r.report.passed;
    } else if (mode == "ratio") {
      const auto r = ratio_criterion(fa, fb, anchor, opt);
      j = report_json(r, anchor);
      passed = r.passed;
    } else {
      const auto t = normal_criterion(fa, fb, anchor, opt).transformation;
      const auto r = is_bertrand_pair(fa, fb, t, config.tol);
      const auto [lo, hi] = std::minmax_element(r.factor.begin(), r.factor.end());
      j["criterion"] = "bertrand";
      j["verdict"] = r.dependent ? "pass" : "fail";
      j["passed"] = r.dependent;
      j["tol"] = config.tol;
      j["anchor"] = {{"s_a", anchor.s_a}, {"s_b", anchor.s_b}};
      j["dependent"] = r.dependent;
      j["unit_factor"] = r.unit_factor;
      j["max_wedge"] = r.max_wedge;
      j["factor"] = {{"min", *lo}, {"max", *hi}};
      passed = r.dependent;
    }
    out << j.dump(1) << '\n';
    return passed ? kExitOk : kExitCriterionFail;
  } catch (const GeometryError& e) {
    return report_error(e, err);
  }
}

int run_synthesize(const CurveSpec& a, const SynthesizeRequest& request, const RunConfig& config, std::ostream& out,
                   std::ostream& err) {
  try {
    config.validate();
    const ScalarFunction lambda = parse_profile(request.lambda);
    const auto ra = resolve_curve(a, config);
    const Interval da = ra.curve.domain();
    const double s_a0 = request.anchor_a.value_or(da.lo);
    if (!da.contains(s_a0)) throw GeometryError(ErrorCode::OutOfDomain, "anchor-a outside the curve domain", s_a0);
    const Interval db = request.domain.value_or(Interval{0.0, span_for_image(lambda, 0.0, da.hi - s_a0)});
    const Anchor anchor{s_a0, db.lo};
    const Vec3 origin = request.origin.value_or(ra.curve.position(s_a0));
    const NullCurve b = synthesize_similar(ra.curve, lambda, db, origin, anchor);

    const ParameterGrid grid = ParameterGrid::uniform(db, config.samples.value_or(a.samples));
    const FramedCurve fb = frame_curve(b, grid, frame_options(config));
    const auto t = VariableTransformation::from_lambda(lambda, grid, anchor);
    const auto phi = phi_column(fb, config, err);
    std::vector<std::vector<double>> rows;
    rows.reserve(fb.size());
    for (std::size_t i = 0; i < fb.size(); ++i) {
      auto row = frame_row(b, fb[i], phi[i]);
      const FrameSample fa = compute_frame_at(ra.curve, t.s_a()[i], frame_options(config));
      const double lam = t.lambda()[i];
      row.insert(row.end(), {t.s_a()[i], lam, fb[i].kappa - lam * fa.kappa, fb[i].tau - lam * fa.tau});
      rows.push_back(std::move(row));
    }
    emit_table(synthesize_columns(), rows, config.format, out);
    return kExitOk;
  } catch (const GeometryError& e) {
    return report_error(e, err);
  }
}

int run_family(const CurveSpec& spec, const std::string& lambda, const RunConfig& config, std::ostream& out,
               std::ostream& err) {
  try {
    config.validate();
    if (spec.kind != CurveKind::Family) invalid("family command needs a {\"kind\":\"family\"} curve spec");
    FamilySpec f = spec.family;
    f.samples = config.samples.value_or(spec.samples);
    const ScalarFunction lam = parse_profile(lambda);
    const auto v = closure_check(f, lam, config.tol);
    json j;
    j["family"] = std::string(to_string(v.kind));
    j["lambda"] = lambda;
    j["verdict"] = v.passed ? "pass" : "fail";
    j["passed"] = v.passed;
    j["tol"] = v.tol;
    j["measurements"] = residuals_json(v.measurements);
    j["note"] = v.note;
    out << j.dump(1) << '\n';
    return v.passed ? kExitOk : kExitCriterionFail;
  } catch (const GeometryError& e) {
    return report_error(e, err);
  }
}

}  // namespace nullsim::cli
