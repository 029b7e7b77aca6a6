#include "mlab/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "evaluators.hpp"
#include "mlab/qseries.hpp"

namespace mlab {

const char* builtin_catalog_text();  // generated at configure time

using nlohmann::json;

bool IdentityRecord::has_tag(const std::string& t) const {
  return std::find(tags.begin(), tags.end(), t) != tags.end();
}

std::string status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Error: return "error";
  }
  return "error";
}

namespace {

Status parse_status(const std::string& s) {
  if (s == "pass") return Status::Pass;
  if (s == "fail") return Status::Fail;
  if (s == "error") return Status::Error;
  throw std::invalid_argument("unknown status '" + s + "'");
}

IdentityRecord parse_record(const json& j) {
  auto need = [&](const char* key) -> const json& {
    if (!j.contains(key)) throw std::invalid_argument(std::string("catalog record missing '") + key + "'");
    return j.at(key);
  };
  IdentityRecord r;
  r.id = need("id").get<std::string>();
  r.description = need("description").get<std::string>();
  r.paper_ref = need("paper_ref").get<std::string>();
  std::string kind = need("kind").get<std::string>();
  if (kind == "exact_series")
    r.kind = IdentityKind::ExactSeries;
  else if (kind == "numeric")
    r.kind = IdentityKind::Numeric;
  else
    throw std::invalid_argument(r.id + ": unknown kind '" + kind + "'");
  r.params = need("params");
  r.tolerance = need("tolerance").get<double>();
  r.tags = need("tags").get<std::vector<std::string>>();
  if (!(r.tolerance > 0.0)) throw std::invalid_argument(r.id + ": tolerance must be positive");
  if (r.kind == IdentityKind::ExactSeries) {
    if (!r.params.contains("lhs") || !r.params.contains("rhs"))
      throw std::invalid_argument(r.id + ": exact record needs lhs and rhs");
  } else {
    std::string ev = r.params.value("evaluator", "");
    if (!detail::evaluator_registry().count(ev))
      throw std::invalid_argument(r.id + ": unknown evaluator '" + ev + "'");
  }
  if (r.paper_ref.empty() && !r.negative_control())
    throw std::invalid_argument(r.id + ": paper_ref required");
  return r;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void run_exact(const IdentityRecord& r, VerifyReport& rep) {
  const std::string lhs = r.params.at("lhs").get<std::string>();
  const std::string rhs = r.params.at("rhs").get<std::string>();
  const long N = static_cast<long>(r.tolerance);
  Expr e1 = parse_expr(lhs, true), e2 = parse_expr(rhs, true);
  auto cmp = compare_series(e1, e2, N);
  rep.tol = 0.0;
  if (cmp.equal) {
    rep.status = Status::Pass;
    rep.message = "coefficients agree to O(q^" + std::to_string(N) + ")";
    return;
  }
  mpq_class order = std::min(cmp.order_lhs, cmp.order_rhs);
  FracSeries s1 = series_of(e1, order), s2 = series_of(e2, order);
  rep.lhs = s1.coeff(cmp.first_mismatch).get_d();
  rep.rhs = s2.coeff(cmp.first_mismatch).get_d();
  rep.abs_err = std::abs(rep.lhs - rep.rhs);
  if (rep.abs_err == 0.0) rep.abs_err = 1.0;  // agreement only lost to truncation
  rep.status = Status::Fail;
  rep.message = "first mismatch at q^" + cmp.first_mismatch.get_str();
}

void run_numeric(const IdentityRecord& r, VerifyReport& rep) {
  const auto& ev = detail::evaluator_registry().at(r.params.at("evaluator").get<std::string>());
  auto checks = ev(r.params);
  if (checks.empty()) throw std::runtime_error("evaluator produced no comparisons");
  // The reported error is the worst check, scaled to the record tolerance.
  double worst = -1.0;
  const detail::Check* w = nullptr;
  bool all_finite = true;
  for (const auto& c : checks) {
    double tol = std::isnan(c.tol) ? r.tolerance : c.tol;
    double d = std::abs(c.lhs - c.rhs);
    if (!std::isfinite(d)) all_finite = false;
    double ratio = std::isfinite(d) ? d / tol : std::numeric_limits<double>::infinity();
    if (ratio > worst) {
      worst = ratio;
      w = &c;
    }
  }
  rep.lhs = w->lhs;
  rep.rhs = w->rhs;
  rep.tol = r.tolerance;
  rep.abs_err = worst * r.tolerance;
  rep.status = (all_finite && worst <= 1.0) ? Status::Pass : Status::Fail;
  rep.message = "worst: " + w->label;
  if (checks.size() > 1) rep.message += " (" + std::to_string(checks.size()) + " checks)";
}

}  // namespace

std::vector<IdentityRecord> parse_catalog(const std::string& json_text) {
  json doc = json::parse(json_text);
  const json& arr = doc.is_object() ? doc.at("identities") : doc;
  std::vector<IdentityRecord> out;
  std::set<std::string> seen;
  for (const auto& j : arr) {
    auto r = parse_record(j);
    if (!seen.insert(r.id).second) throw std::invalid_argument("duplicate id " + r.id);
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

const std::string& builtin_catalog_json() {
  static const std::string text = builtin_catalog_text();
  return text;
}

const std::vector<IdentityRecord>& catalog() {
  static const std::vector<IdentityRecord> records = parse_catalog(builtin_catalog_json());
  return records;
}

std::vector<IdentityRecord> list_identities(const std::string& filter) {
  std::vector<IdentityRecord> out;
  for (const auto& r : catalog())
    if (filter.empty() || filter == "all" || r.has_tag(filter)) out.push_back(r);
  return out;
}

const IdentityRecord& find_identity(const std::string& id) {
  for (const auto& r : catalog())
    if (r.id == id) return r;
  throw std::out_of_range("unknown identity id '" + id + "'");
}

VerifyReport run_record(const IdentityRecord& r) {
  VerifyReport rep;
  rep.id = r.id;
  rep.description = r.description;
  rep.paper_ref = r.paper_ref;
  rep.tol = r.tolerance;
  rep.negative_control = r.negative_control();
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (r.kind == IdentityKind::ExactSeries)
      run_exact(r, rep);
    else
      run_numeric(r, rep);
  } catch (const std::exception& e) {
    rep.status = Status::Error;
    rep.message = e.what();
  }
  rep.seconds = elapsed(t0);
  return rep;
}

VerifyReport run(const std::string& id) { return run_record(find_identity(id)); }

RunSummary summarize(const std::vector<VerifyReport>& reports) {
  RunSummary s;
  for (const auto& r : reports) {
    if (r.status == Status::Pass) ++s.pass;
    if (r.status == Status::Fail) ++s.fail;
    if (r.status == Status::Error) ++s.error;
    if (r.negative_control) {
      (r.status == Status::Pass ? s.control_pass : s.control_fail)++;
    } else if (r.status != Status::Pass) {
      ++s.noncontrol_bad;
    }
  }
  return s;
}

unsigned default_parallelism() {
  if (const char* env = std::getenv("MLAB_PARALLELISM")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

VerifyRun run_records(const std::vector<IdentityRecord>& records, unsigned parallelism) {
  if (parallelism == 0) parallelism = default_parallelism();
  std::vector<const IdentityRecord*> order;
  for (const auto& r : records) order.push_back(&r);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->id < b->id; });

  VerifyRun out;
  out.reports.resize(order.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < order.size();) out.reports[i] = run_record(*order[i]);
  };
  unsigned n = std::min<unsigned>(parallelism, std::max<std::size_t>(order.size(), 1));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  out.summary = summarize(out.reports);
  return out;
}

VerifyRun run_all(const std::string& filter, unsigned parallelism) {
  return run_records(list_identities(filter), parallelism);
}

std::vector<std::string> evaluator_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : detail::evaluator_registry()) out.push_back(k);
  return out;
}

// ---------------------------------------------------------------- rendering

namespace {

// JSON has no NaN or infinity; those travel as strings.
json real_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double real_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  std::string s = j.get<std::string>();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  throw std::invalid_argument("not a number: '" + s + "'");
}

}  // namespace

json to_json(const VerifyReport& r) {
  return json{{"id", r.id},           {"description", r.description}, {"paper_ref", r.paper_ref},
              {"lhs", real_json(r.lhs)}, {"rhs", real_json(r.rhs)},   {"abs_err", real_json(r.abs_err)},
              {"tol", real_json(r.tol)},         {"status", status_name(r.status)}, {"seconds", r.seconds},
              {"message", r.message}, {"negative_control", r.negative_control}};
}

VerifyReport report_from_json(const json& j) {
  VerifyReport r;
  r.id = j.at("id").get<std::string>();
  r.description = j.at("description").get<std::string>();
  r.paper_ref = j.at("paper_ref").get<std::string>();
  r.lhs = real_from(j.at("lhs"));
  r.rhs = real_from(j.at("rhs"));
  r.abs_err = real_from(j.at("abs_err"));
  r.tol = real_from(j.at("tol"));
  r.status = parse_status(j.at("status").get<std::string>());
  r.seconds = j.at("seconds").get<double>();
  r.message = j.value("message", "");
  r.negative_control = j.value("negative_control", false);
  return r;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string csv_header() { return "id,description,paper_ref,lhs,rhs,abs_err,tol,status,seconds"; }

std::string to_csv(const VerifyReport& r) {
  std::ostringstream os;
  os << csv_field(r.id) << ',' << csv_field(r.description) << ',' << csv_field(r.paper_ref) << ','
     << num17(r.lhs) << ',' << num17(r.rhs) << ',' << num17(r.abs_err) << ',' << num17(r.tol) << ','
     << status_name(r.status) << ',' << num17(r.seconds);
  return os.str();
}

}  // namespace mlab
