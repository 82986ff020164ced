#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tfpack/errors.hpp"
#include "tfpack/report.hpp"

namespace tfpack::cli {

/// Fully resolved run configuration. Keys mirror the flat JSON config file
/// and the long command-line flags (underscores become dashes).
struct RunConfig {
  std::string mode;  // gen certify pack-pseudo pack-random pack-bootstrap bounds verify
  std::size_t n = 120;
  std::size_t t = 2;
  std::optional<std::size_t> tau;
  double p = 0.5;
  double epsilon = 0.5;
  std::uint64_t seed = 0;
  double scale = 1.0;
  std::optional<std::size_t> r_override;
  double slack = 1.0;
  unsigned threads = 1;

  std::string graph;       // edge-list input; generated from (n, p, seed) when empty
  std::string tree;        // tree file; otherwise tree_shape on t vertices
  std::string tree_shape = "path";  // path | star
  std::string factors;     // factor file to check (verify)

  std::string out;         // JSON report; stdout when empty
  std::string graph_out;   // gen: edge list destination
  std::string factors_out;
  std::string csv;         // per-blow-up table
  std::string kappa_csv;   // appearance-count histogram
  std::vector<std::size_t> sweep_r;
  std::string sweep_csv;   // coverage vs r_override

  std::optional<std::size_t> bipartite_nu;  // gen: B(nu,nu,p) instead of G(n,p)
  bool strict = false;                      // certify: also non-super pairs
  bool blowup = false;                      // certify: also certify one random blow-up

  std::optional<std::size_t> outer_r_override;
  double outer_scale = 1.0;
  std::optional<double> C;

  std::optional<double> mu;
  std::optional<std::size_t> perm_n;
  double lipschitz = 1.0;
  std::optional<double> deviation;
  std::string perm_denominator = "n";  // n | n-1
  std::optional<double> eta;
  std::optional<double> d;
  std::optional<double> nu;
};

enum class ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfig = 2,
  kIo = 3,
  kDivisibility = 4,
  kVerification = 5,
};

/// Configuration violation (exit 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

Json to_json(const RunConfig& config);

/// Applies a flat JSON object on top of config. Unknown keys are errors.
void apply_json(RunConfig& config, const Json& object);

/// Parses argv: defaults, then TFPACK_SEED, then --config file, then flags.
/// Returns nullopt when help was printed.
std::optional<RunConfig> parse_command_line(int argc, char** argv, std::ostream& out);

/// Checks the RunConfig invariants (throws ConfigError / DivisibilityError).
void validate(const RunConfig& config);

/// Executes the run and returns the report; writes every requested file.
/// Throws on failure; a failed verify throws VerificationError after the
/// report has been written.
Json execute(const RunConfig& config);

/// execute() plus error classification: prints a one-line JSON error to
/// `err` and returns the exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace tfpack::cli
