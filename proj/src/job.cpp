#include "kappa/job.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace kappa {

namespace {

// -- formatting -------------------------------------------------------------

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string complex_json(Complex v) {
  return "[" + fmt17(v.real()) + ", " + fmt17(v.imag()) + "]";
}

const char* method_name(Method m) {
  switch (m) {
    case Method::General: return "general";
    case Method::ClosedForm: return "closed-form";
    case Method::Both: return "both";
  }
  return "general";
}

const char* check_name(CheckKind c) {
  switch (c) {
    case CheckKind::Frenet: return "frenet";
    case CheckKind::Invariance: return "invariance";
    case CheckKind::UnitDet: return "unit-det";
  }
  return "frenet";
}

// -- per-point evaluation -----------------------------------------------------

std::vector<CJet> final_lifting(const JobSpec& spec, const CurveSpec& curve,
                                Complex point) {
  const int order = required_order(curve.n);
  if (spec.coordinate_change) {
    CoordinateChange cc{parse(*spec.coordinate_change), point};
    const CJet zw = change_jet(cc, order);
    std::vector<CJet> lifting;
    lifting.reserve(curve.n + 1);
    lifting.push_back(CJet::constant(Complex(1.0, 0.0), point, order));
    for (int j = 0; j < curve.n; ++j) {
      CJet outer = eval_jet(*curve.components[j], zw.value(), order);
      lifting.push_back(compose(outer, zw));
    }
    return lifting;
  }
  std::vector<CJet> lifting = lift(curve, point, order);
  if (spec.affine) return transformed_lifting(lifting, *spec.affine, curve.n);
  return lifting;
}

std::vector<Complex> closed_form_kappas(std::span<const CJet> lifting, int n) {
  // chart components x_j = f_j / f_0 (f_0 is the constant 1 unless an
  // affine transform was applied)
  if (n == 1) return {kappa0_n1(lifting[1] / lifting[0])};
  auto [k0, k1] = kappa_n2(lifting[1] / lifting[0], lifting[2] / lifting[0]);
  return {k0, k1};
}

double relative_deviation(std::span<const Complex> a, std::span<const Complex> b) {
  double dev = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
    dev = std::max(dev, std::abs(a[i] - b[i]) / (1.0 + std::abs(a[i])));
  return dev;
}

AffineMap random_affine(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int attempt = 0; attempt < 256; ++attempt) {
    AffineMap map;
    map.A = MatrixXc(n + 1, n + 1);
    map.b = VectorXc(n + 1);
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) map.A(i, j) = Complex(unit(rng), unit(rng));
      map.b(i) = 0.25 * Complex(unit(rng), unit(rng));
    }
    // On a leading-1 lifting the constant part acts through the first
    // column, so condition the effective matrix.
    MatrixXc effective = map.A;
    effective.col(0) += map.b;
    if (std::abs(map.A.determinant()) < 0.1) continue;
    if (std::abs(effective.determinant()) < 0.1) continue;
    return map;
  }
  throw Error("failed to draw a well-conditioned affine map");
}

CheckOutcome invariance_check(std::span<const CJet> lifting, int n,
                              std::span<const Complex> kappas, double tol,
                              std::uint64_t point_seed) {
  std::mt19937_64 rng(point_seed);
  double worst = 0.0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    AffineMap map = random_affine(rng, n);
    CurvatureResult transformed;
    try {
      transformed = kappa_from_lifting(transformed_lifting(lifting, map, n), n);
    } catch (const ChartEscape&) {
      continue;  // point happens to leave the chart under this map
    }
    std::vector<Complex> tk(transformed.kappas.data(),
                            transformed.kappas.data() + transformed.kappas.size());
    worst = std::max(worst, relative_deviation(kappas, tk));
  }
  return {"invariance", worst <= tol, worst};
}

PointRecord evaluate_point(const JobSpec& spec, const CurveSpec& curve, Complex point,
                           std::size_t index) {
  PointRecord rec;
  rec.point = point;
  try {
    const std::vector<CJet> lifting = final_lifting(spec, curve, point);
    const FrameData fd = build_frame(lifting, curve.n);
    const CurvatureResult result = curvature_result(fd);

    rec.kappas.assign(result.kappas.data(), result.kappas.data() + result.kappas.size());
    rec.frenet_residual = result.frenet_residual;
    rec.wronskian_magnitude = result.wronskian_magnitude;
    rec.residual_flagged = result.frenet_residual > 1e-7 * result.frame_scale;

    if (spec.method != Method::General) {
      rec.closed_form_kappas = closed_form_kappas(lifting, curve.n);
      if (spec.method == Method::Both)
        rec.method_deviation = relative_deviation(rec.kappas, rec.closed_form_kappas);
      if (spec.method == Method::ClosedForm) rec.kappas = rec.closed_form_kappas;
    }

    for (CheckKind kind : spec.checks) {
      switch (kind) {
        case CheckKind::Frenet: {
          const double dev = result.frenet_residual / result.frame_scale;
          rec.checks.push_back({"frenet", dev <= spec.tolerance, dev});
          break;
        }
        case CheckKind::UnitDet: {
          const double dev = std::abs(fd.frame_vectors.determinant() - Complex(1.0, 0.0));
          rec.checks.push_back({"unit-det", dev <= spec.tolerance, dev});
          break;
        }
        case CheckKind::Invariance: {
          const std::uint64_t point_seed =
              spec.seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(index) + 1);
          rec.checks.push_back(
              invariance_check(lifting, curve.n, rec.kappas, spec.tolerance, point_seed));
          break;
        }
      }
    }
  } catch (const DegenerateCurve&) {
    rec.status = "degenerate";
  } catch (const ChartEscape&) {
    rec.status = "chart-escape";
  } catch (const Error& err) {
    rec.status = std::string("error: ") + err.what();
  }
  return rec;
}

}  // namespace

bool JobResult::all_ok() const {
  for (const PointRecord& rec : records) {
    if (rec.status != "ok") return false;
  }
  return true;
}

void validate_job(const JobSpec& spec) {
  if (spec.n < 1) throw InvalidInput("n must be >= 1");
  if (static_cast<int>(spec.components.size()) != spec.n)
    throw InvalidInput("need exactly n curve components, got " +
                       std::to_string(spec.components.size()));
  if (spec.points.empty() && !spec.sweep) throw InvalidInput("no evaluation points given");
  if (spec.sweep && spec.sweep->count < 2) throw InvalidInput("sweep count must be >= 2");
  if (spec.method != Method::General && spec.n > 2)
    throw InvalidInput("closed-form method is only available for n <= 2");
  if (spec.affine && spec.coordinate_change)
    throw InvalidInput("choose either an affine transform or a coordinate change");
  if (!(spec.tolerance > 0.0)) throw InvalidInput("tolerance must be positive");
}

std::vector<Complex> job_points(const JobSpec& spec) {
  std::vector<Complex> points = spec.points;
  if (spec.sweep) {
    const SweepSpec& s = *spec.sweep;
    for (int k = 0; k < s.count; ++k) {
      const double t = double(k) / double(s.count - 1);
      points.push_back(s.start + t * (s.end - s.start));
    }
  }
  return points;
}

JobResult run_job(const JobSpec& spec) {
  validate_job(spec);
  CurveSpec curve = make_curve(spec.n, spec.components);
  if (spec.affine) validate_affine(*spec.affine, spec.n);
  if (spec.coordinate_change) parse(*spec.coordinate_change);

  JobResult result;
  const std::vector<Complex> points = job_points(spec);
  result.records.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    result.records.push_back(evaluate_point(spec, curve, points[i], i));
  return result;
}

// -- serialization ------------------------------------------------------------

std::string to_json(const JobSpec& spec, const JobResult& result) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"n\": " << spec.n << ",\n";
  os << "  \"components\": [";
  for (std::size_t i = 0; i < spec.components.size(); ++i) {
    if (i) os << ", ";
    os << '"' << json_escape(spec.components[i]) << '"';
  }
  os << "],\n";
  os << "  \"method\": \"" << method_name(spec.method) << "\",\n";
  os << "  \"tolerance\": " << fmt17(spec.tolerance) << ",\n";
  os << "  \"records\": [";
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const PointRecord& rec = result.records[i];
    os << (i ? ",\n    {" : "\n    {");
    os << "\"point\": " << complex_json(rec.point);
    os << ", \"status\": \"" << json_escape(rec.status) << '"';
    os << ", \"kappas\": [";
    for (std::size_t k = 0; k < rec.kappas.size(); ++k) {
      if (k) os << ", ";
      os << complex_json(rec.kappas[k]);
    }
    os << ']';
    if (rec.status == "ok") {
      os << ", \"frenet_residual\": " << fmt17(rec.frenet_residual);
      os << ", \"wronskian_magnitude\": " << fmt17(rec.wronskian_magnitude);
      os << ", \"residual_flagged\": " << (rec.residual_flagged ? "true" : "false");
      if (!rec.closed_form_kappas.empty()) {
        os << ", \"closed_form_kappas\": [";
        for (std::size_t k = 0; k < rec.closed_form_kappas.size(); ++k) {
          if (k) os << ", ";
          os << complex_json(rec.closed_form_kappas[k]);
        }
        os << ']';
      }
      if (rec.method_deviation)
        os << ", \"method_deviation\": " << fmt17(*rec.method_deviation);
      if (!rec.checks.empty()) {
        os << ", \"checks\": [";
        for (std::size_t k = 0; k < rec.checks.size(); ++k) {
          const CheckOutcome& c = rec.checks[k];
          if (k) os << ", ";
          os << "{\"name\": \"" << c.name << "\", \"pass\": "
             << (c.pass ? "true" : "false")
             << ", \"deviation\": " << fmt17(c.deviation) << '}';
        }
        os << ']';
      }
    }
    os << '}';
  }
  os << (result.records.empty() ? "]\n" : "\n  ]\n");
  os << "}\n";
  return os.str();
}

std::string to_csv(const JobSpec& spec, const JobResult& result) {
  std::ostringstream os;
  os << "point_re,point_im,status";
  for (int j = 0; j < spec.n; ++j) os << ",kappa" << j << "_re,kappa" << j << "_im";
  os << ",frenet_residual,wronskian_magnitude\n";
  for (const PointRecord& rec : result.records) {
    os << fmt17(rec.point.real()) << ',' << fmt17(rec.point.imag()) << ',';
    // commas in error messages would break the row; keep the field quoted
    os << '"' << rec.status << '"';
    for (int j = 0; j < spec.n; ++j) {
      if (j < static_cast<int>(rec.kappas.size()))
        os << ',' << fmt17(rec.kappas[j].real()) << ',' << fmt17(rec.kappas[j].imag());
      else
        os << ",,";
    }
    if (rec.status == "ok")
      os << ',' << fmt17(rec.frenet_residual) << ',' << fmt17(rec.wronskian_magnitude);
    else
      os << ",,";
    os << '\n';
  }
  return os.str();
}

// -- JSON input ---------------------------------------------------------------

namespace {

using nlohmann::json;

Complex complex_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InvalidInput(std::string(what) + " must be a [re, im] pair");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Method method_from_name(const std::string& name) {
  if (name == "general") return Method::General;
  if (name == "closed-form") return Method::ClosedForm;
  if (name == "both") return Method::Both;
  throw InvalidInput("unknown method '" + name + "'");
}

CheckKind check_from_name(const std::string& name) {
  if (name == "frenet") return CheckKind::Frenet;
  if (name == "invariance") return CheckKind::Invariance;
  if (name == "unit-det") return CheckKind::UnitDet;
  throw InvalidInput("unknown check '" + name + "'");
}

OutputFormat output_from_name(const std::string& name) {
  if (name == "json") return OutputFormat::Json;
  if (name == "csv") return OutputFormat::Csv;
  throw InvalidInput("unknown output format '" + name + "'");
}

AffineMap affine_from_json(const json& j) {
  if (!j.contains("matrix") || !j["matrix"].is_array())
    throw InvalidInput("affine document needs a \"matrix\" array");
  const json& rows = j["matrix"];
  const int size = static_cast<int>(rows.size());
  AffineMap map;
  map.A = MatrixXc(size, size);
  map.b = VectorXc::Zero(size);
  for (int i = 0; i < size; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != size)
      throw InvalidInput("affine matrix must be square");
    for (int c = 0; c < size; ++c)
      map.A(i, c) = complex_from_json(rows[i][c], "matrix entry");
  }
  if (j.contains("vector")) {
    const json& vec = j["vector"];
    if (!vec.is_array() || static_cast<int>(vec.size()) != size)
      throw InvalidInput("affine vector must have n+1 entries");
    for (int i = 0; i < size; ++i) map.b(i) = complex_from_json(vec[i], "vector entry");
  }
  return map;
}

}  // namespace

AffineMap affine_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& err) {
    throw InvalidInput(std::string("bad affine JSON: ") + err.what());
  }
  return affine_from_json(j);
}

JobSpec job_from_json_text(const std::string& text, JobSpec base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& err) {
    throw InvalidInput(std::string("bad job JSON: ") + err.what());
  }
  if (!j.is_object()) throw InvalidInput("job document must be a JSON object");

  JobSpec spec = std::move(base);
  try {
    if (j.contains("n")) spec.n = j["n"].get<int>();
    if (j.contains("components"))
      spec.components = j["components"].get<std::vector<std::string>>();
    if (j.contains("points")) {
      spec.points.clear();
      for (const json& p : j["points"])
        spec.points.push_back(complex_from_json(p, "point"));
    }
    if (j.contains("sweep")) {
      const json& s = j["sweep"];
      SweepSpec sweep;
      sweep.start = complex_from_json(s.at("start"), "sweep start");
      sweep.end = complex_from_json(s.at("end"), "sweep end");
      sweep.count = s.at("count").get<int>();
      spec.sweep = sweep;
    }
    if (j.contains("method")) spec.method = method_from_name(j["method"].get<std::string>());
    if (j.contains("checks")) {
      spec.checks.clear();
      for (const json& c : j["checks"]) spec.checks.push_back(check_from_name(c.get<std::string>()));
    }
    if (j.contains("transform")) {
      const json& t = j["transform"];
      if (t.contains("affine")) spec.affine = affine_from_json(t["affine"]);
      if (t.contains("coordinates")) spec.coordinate_change = t["coordinates"].get<std::string>();
    }
    if (j.contains("output")) spec.output = output_from_name(j["output"].get<std::string>());
    if (j.contains("tolerance")) spec.tolerance = j["tolerance"].get<double>();
  } catch (const json::exception& err) {
    throw InvalidInput(std::string("bad job document: ") + err.what());
  }
  return spec;
}

// -- command line ---------------------------------------------------------------

namespace {

Complex parse_complex_pair(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw InvalidInput(std::string(what) + " must be RE,IM");
  char* end = nullptr;
  const std::string re_text = text.substr(0, comma);
  const std::string im_text = text.substr(comma + 1);
  const double re = std::strtod(re_text.c_str(), &end);
  if (end != re_text.c_str() + re_text.size())
    throw InvalidInput(std::string(what) + ": bad real part '" + re_text + "'");
  const double im = std::strtod(im_text.c_str(), &end);
  if (end != im_text.c_str() + im_text.size())
    throw InvalidInput(std::string(what) + ": bad imaginary part '" + im_text + "'");
  if (!std::isfinite(re) || !std::isfinite(im))
    throw InvalidInput(std::string(what) + " must be finite");
  return Complex(re, im);
}

SweepSpec parse_sweep(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = text.rfind(':');
  if (c1 == std::string::npos || c2 == c1)
    throw InvalidInput("--sweep must be RE,IM:RE,IM:COUNT");
  SweepSpec sweep;
  sweep.start = parse_complex_pair(text.substr(0, c1), "sweep start");
  sweep.end = parse_complex_pair(text.substr(c1 + 1, c2 - c1 - 1), "sweep end");
  const std::string count_text = text.substr(c2 + 1);
  char* end = nullptr;
  sweep.count = static_cast<int>(std::strtol(count_text.c_str(), &end, 10));
  if (end != count_text.c_str() + count_text.size() || sweep.count < 2)
    throw InvalidInput("sweep count must be an integer >= 2");
  return sweep;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    if (comma == std::string::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, comma - start));
    start = comma + 1;
  }
  return parts;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Schwarzian curvatures of analytic curves in CP^n"};
  app.get_formatter()->column_width(34);

  int n = 0;
  std::vector<std::string> curves;
  std::vector<std::string> at_points;
  std::string sweep_text, method_text = "general", checks_text, output_text = "json";
  std::string affine_path, coords_expr, spec_path;
  double tolerance = 1e-8;

  app.add_option("--n", n, "projective dimension n >= 1");
  app.add_option("--curve", curves, "curve component expression (repeat n times)");
  app.add_option("--at", at_points, "evaluation point RE,IM (repeatable)");
  app.add_option("--sweep", sweep_text, "straight-line sweep RE,IM:RE,IM:COUNT");
  app.add_option("--method", method_text, "general | closed-form | both");
  app.add_option("--check", checks_text, "comma list of frenet,invariance,unit-det");
  app.add_option("--transform-affine", affine_path, "JSON file with matrix and vector");
  app.add_option("--transform-coords", coords_expr, "coordinate change z(w) expression");
  app.add_option("--output", output_text, "json | csv");
  app.add_option("--tol", tolerance, "check tolerance (default 1e-8)");
  app.add_option("--spec", spec_path, "JobSpec JSON document; overrides flags");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  }

  JobSpec spec;
  try {
    spec.n = n;
    spec.components = curves;
    for (const std::string& p : at_points)
      spec.points.push_back(parse_complex_pair(p, "--at"));
    if (!sweep_text.empty()) spec.sweep = parse_sweep(sweep_text);
    spec.method = method_from_name(method_text);
    if (!checks_text.empty()) {
      for (const std::string& c : split_commas(checks_text))
        spec.checks.push_back(check_from_name(c));
    }
    if (!affine_path.empty()) spec.affine = affine_from_json_text(read_file(affine_path));
    if (!coords_expr.empty()) spec.coordinate_change = coords_expr;
    spec.output = output_from_name(output_text);
    spec.tolerance = tolerance;
    if (const char* seed_env = std::getenv("KAPPA_SEED")) {
      char* end = nullptr;
      spec.seed = std::strtoull(seed_env, &end, 10);
      if (end == seed_env || *end != '\0')
        throw InvalidInput("KAPPA_SEED must be a nonnegative integer");
    }
    if (!spec_path.empty()) spec = job_from_json_text(read_file(spec_path), std::move(spec));

    // sweeps default to tabular output unless the user asked for JSON
    if (spec.sweep && output_text == "json" && spec_path.empty() &&
        app.count("--output") == 0)
      spec.output = OutputFormat::Csv;

    validate_job(spec);
  } catch (const Error& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  JobResult result;
  try {
    result = run_job(spec);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  out << (spec.output == OutputFormat::Json ? to_json(spec, result) : to_csv(spec, result));
  for (const PointRecord& rec : result.records) {
    if (rec.residual_flagged)
      err << "warning: Frenet residual above threshold at point (" << rec.point.real()
          << ", " << rec.point.imag() << ")\n";
  }
  bool any_check_failed = false;
  for (const PointRecord& rec : result.records)
    for (const CheckOutcome& c : rec.checks)
      if (!c.pass) any_check_failed = true;
  if (!result.all_ok()) return 2;
  if (any_check_failed) return 2;
  return 0;
}

}  // namespace kappa
