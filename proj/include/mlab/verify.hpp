#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace mlab {

enum class IdentityKind { ExactSeries, Numeric };

struct IdentityRecord {
  std::string id;
  std::string description;
  std::string paper_ref;
  IdentityKind kind = IdentityKind::Numeric;
  nlohmann::json params;
  // Numeric: absolute tolerance. Exact: truncation order N.
  double tolerance = 0.0;
  std::vector<std::string> tags;

  bool has_tag(const std::string& t) const;
  bool negative_control() const { return has_tag("negative_control"); }
};

enum class Status { Pass, Fail, Error };
std::string status_name(Status s);

struct VerifyReport {
  std::string id;
  std::string description;
  std::string paper_ref;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double tol = 0.0;
  Status status = Status::Error;
  double seconds = 0.0;
  std::string message;
  bool negative_control = false;
};

struct RunSummary {
  int pass = 0;
  int fail = 0;
  int error = 0;
  int control_fail = 0;     // negative controls that failed, as they should
  int control_pass = 0;     // negative controls that passed: a broken comparator
  int noncontrol_bad = 0;   // non-control records with status fail or error
};

struct VerifyRun {
  std::vector<VerifyReport> reports;  // sorted by id
  RunSummary summary;
};

// Parse a catalog document; throws std::invalid_argument on schema errors.
std::vector<IdentityRecord> parse_catalog(const std::string& json_text);
// The catalog compiled into the library.
const std::string& builtin_catalog_json();
const std::vector<IdentityRecord>& catalog();

// Sorted by id. An empty filter or "all" selects everything; otherwise a tag.
std::vector<IdentityRecord> list_identities(const std::string& filter = "");
const IdentityRecord& find_identity(const std::string& id);

VerifyReport run(const std::string& id);
VerifyReport run_record(const IdentityRecord& r);
// parallelism 0 means default_parallelism().
VerifyRun run_all(const std::string& filter = "", unsigned parallelism = 0);
VerifyRun run_records(const std::vector<IdentityRecord>& records, unsigned parallelism = 0);
RunSummary summarize(const std::vector<VerifyReport>& reports);

// MLAB_PARALLELISM if set to a positive integer, else hardware concurrency.
unsigned default_parallelism();

std::vector<std::string> evaluator_names();

nlohmann::json to_json(const VerifyReport& r);
VerifyReport report_from_json(const nlohmann::json& j);
std::string csv_header();
std::string to_csv(const VerifyReport& r);

}  // namespace mlab
