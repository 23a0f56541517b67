#ifndef KOTHE_CLI_HPP
#define KOTHE_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kothe/lorentz.hpp"
#include "kothe/multipliers.hpp"
#include "kothe/rademacher.hpp"

namespace kothe {

using Json = nlohmann::json;

enum class Command { Norm, Dual, MultSpace, MultNorm, EssNorm, CompactCheck, Conjugate, FactorizeCheck, LemmaR, VerifyPaper };
const char* to_string(Command c);
/// Raises InvalidArgument for unknown names.
Command parse_command(const std::string& name);

enum class OutputFormat { Table, Csv };

/// Tagged-object JSON for every serializable value. Closures (custom tails,
/// custom Orlicz functions, derived exponent rules) have no JSON form and raise InvalidArgument.
Json to_json(const TailPtr& t);
Json to_json(const SequenceSpec& x);
Json to_json(const ConcaveWeight& w);
Json to_json(const OrliczFunction& M);
Json to_json(const ExponentRule& r);
Json to_json(const OrliczFamily& f);
Json to_json(const SpaceDescriptor& s);
Json to_json(const Integrand& f);

TailPtr tail_from_json(const Json& j);
SequenceSpec sequence_from_json(const Json& j);
ConcaveWeight weight_from_json(const Json& j);
OrliczFunction orlicz_from_json(const Json& j);
ExponentRule exponents_from_json(const Json& j);
OrliczFamily family_from_json(const Json& j);
SpaceDescriptor space_from_json(const Json& j);
Integrand integrand_from_json(const Json& j);

struct ConjugateJob {
  std::optional<OrliczFunction> N, M;
  double t_min = 0.05;
  double t_max = 1.0;
  int points = 200;
  ConjugateOptions options;
};

struct LemmaJob {
  std::optional<Integrand> integrand;
  MeasurePartition partition = MeasurePartition::unit();
  int n_max = 12;
};

struct CompactJob {
  std::optional<LorentzCase> lorentz_case;
  std::optional<SpaceDescriptor> space;
  std::optional<ConcaveWeight> phi, psi;
};

struct JobConfig {
  Command command = Command::Norm;
  /// "space" is read into X.
  std::optional<SpaceDescriptor> X, Y;
  std::optional<SequenceSpec> x, lambda;
  Truncation truncation;
  /// Empty means the default dyadic grid.
  std::vector<long long> n_grid;
  double tolerance = 1e-12;
  std::uint64_t seed = 0;
  OracleOptions oracle;
  FactorizationOptions factorization;
  ConjugateJob conjugate;
  LemmaJob lemma;
  CompactJob compact;
  OutputFormat format = OutputFormat::Table;
  /// Output directory; empty writes to stdout.
  std::string out;

  /// Ranges and required fields for the command.
  void validate() const;
};

/// Parse and validate; raises InvalidArgument on any malformed or out-of-range field.
JobConfig parse_config(const Json& j);
JobConfig parse_config_text(const std::string& text);
Json to_json(const JobConfig& c);

struct Report {
  Command command = Command::Norm;
  std::vector<std::pair<std::string, std::string>> fields;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;
  std::string error;
};

struct RunResult {
  /// 0 success, 1 failed acceptance criteria, 2 validation error, 3 computational error.
  int status = 0;
  Report report;
};

RunResult run(const JobConfig& config);

/// 12 significant digits; inf and nan spelled out.
std::string format_number(double v);
/// 10^x with 12 significant digits, also far below the double range.
std::string format_pow10(double x);

std::string format_table(const Report& r);
/// Header row then one row per entry; fields only as key,value when the report has no columns.
std::string format_csv(const Report& r);
/// Raises std::runtime_error on IO failure.
void emit_csv(const Report& r, const std::string& path);
void emit_table(const Report& r, const std::string& path);

/// File name stem used under the output directory.
std::string report_stem(const Report& r);

}  // namespace kothe

#endif
