#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pleatlab/classify.hpp"
#include "pleatlab/expr.hpp"
#include "pleatlab/nflab.hpp"

namespace pleatlab::cli {

enum ExitCode { kOk = 0, kError = 1, kDegenerate = 2 };

/// "cubic:b=2", "wellfolded:alpha=-1", "node_nonres:beta=4", "node_res:n=3,eps=1".
OracleId parse_oracle_id(std::string_view text);

/// "name=value".
std::pair<std::string, double> parse_param(std::string_view text);

/// "b=-3,-1,0.25"; only the cubic parameter b can be swept.
std::vector<double> parse_sweep(std::string_view text);

/// "h" (both half-widths) or "xh,ph".
std::pair<double, double> parse_window(std::string_view text);

struct RunConfig {
  std::string command;
  std::optional<std::string> equation;
  std::optional<std::string> file;
  std::optional<std::string> oracle;
  std::optional<std::string> sweep;
  std::vector<std::string> params;
  std::optional<std::string> window;
  double tol_rel = 1e-8;
  double tol_abs = 1e-10;
  double fit_window = 0.1;
  std::string out;
  bool pretty = false;
  std::string epsilon = "unknown";
  std::string curve = "criminant";
  std::optional<std::string> seed;
  int direction = 1;
  std::optional<int> density;
};

Epsilon parse_epsilon(std::string_view text);

// Reports.
nlohmann::ordered_json classify_json(const SingularClass& sc);

struct CheckRow {
  std::string name;
  nlohmann::ordered_json predicted;
  nlohmann::ordered_json measured;
  double tol = 0.0;
  bool pass = false;
  bool informational = false;
};

nlohmann::ordered_json rows_json(const std::vector<CheckRow>& rows);
bool rows_pass(const std::vector<CheckRow>& rows);
std::string rows_table(const std::vector<CheckRow>& rows);

/// Checks of the quadratic tangency, the semicubic invariants and the case
/// table for a pleated improper point. `oracle_b` supplies the analytic b of
/// the cubic family; otherwise b comes from the classification.
std::vector<CheckRow> verify_pleated(const ImplicitOde& ode, std::optional<double> oracle_b, double fit_window);

/// Checks for the well-folded normal form and the node forms.
std::vector<CheckRow> verify_oracle(const OracleId& id, double fit_window);

/// Entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pleatlab::cli
