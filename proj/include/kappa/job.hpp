#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kappa/transform.hpp"

namespace kappa {

enum class Method { General, ClosedForm, Both };
enum class CheckKind { Frenet, Invariance, UnitDet };
enum class OutputFormat { Json, Csv };

/// Straight-line sweep in the complex plane, `count` evenly spaced points.
struct SweepSpec {
  Complex start{};
  Complex end{};
  int count = 0;
};

/// One reproducible computation request. The closed-form method is only
/// available for n <= 2.
struct JobSpec {
  int n = 0;
  std::vector<std::string> components;
  std::vector<Complex> points;
  std::optional<SweepSpec> sweep;
  Method method = Method::General;
  std::vector<CheckKind> checks;
  std::optional<AffineMap> affine;
  std::optional<std::string> coordinate_change;
  OutputFormat output = OutputFormat::Json;
  double tolerance = 1e-8;
  std::uint64_t seed = 0;  // KAPPA_SEED, drives invariance-check matrices
};

struct CheckOutcome {
  std::string name;
  bool pass = false;
  double deviation = 0.0;
};

struct PointRecord {
  Complex point{};
  std::string status = "ok";  // ok | degenerate | chart-escape | error: ...
  std::vector<Complex> kappas;
  double frenet_residual = 0.0;
  double wronskian_magnitude = 0.0;
  bool residual_flagged = false;
  std::vector<Complex> closed_form_kappas;  // method closed-form/both
  std::optional<double> method_deviation;   // method both
  std::vector<CheckOutcome> checks;
};

struct JobResult {
  std::vector<PointRecord> records;
  bool all_ok() const;
};

/// Throws InvalidInput on an inconsistent spec (wrong component count,
/// no points, closed-form with n > 2, bad sweep).
void validate_job(const JobSpec& spec);

/// The evaluation points, with any sweep expanded.
std::vector<Complex> job_points(const JobSpec& spec);

JobResult run_job(const JobSpec& spec);

/// Deterministic serializers; all numbers are printed with 17 significant
/// digits so the output round-trips to the same doubles.
std::string to_json(const JobSpec& spec, const JobResult& result);
std::string to_csv(const JobSpec& spec, const JobResult& result);

/// JobSpec (de)serialization for --spec files; schema in docs/file-formats.md.
/// Fields present in the document override the base spec.
JobSpec job_from_json_text(const std::string& text, JobSpec base = {});

/// Affine map document: {"matrix": [[[re,im],...],...], "vector": [[re,im],...]}.
AffineMap affine_from_json_text(const std::string& text);

/// Full command-line front end. Returns the process exit code: 0 all ok,
/// 1 usage/parse error, 2 any degenerate/error point.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kappa
