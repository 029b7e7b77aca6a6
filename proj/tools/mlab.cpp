// mlab: Mahler measures, lattice sums and identity verification.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mlab/hypergeo.hpp"
#include "mlab/lvalues.hpp"
#include "mlab/mahler.hpp"
#include "mlab/numerics.hpp"
#include "mlab/qseries.hpp"
#include "mlab/verify.hpp"

using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16g", v);
  return buf;
}

double parse_real(const std::string& s, const char* what) {
  std::size_t pos = 0;
  double v;
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) {
      v = std::stod(s, &pos);
    } else {
      std::size_t p2 = 0;
      double a = std::stod(s.substr(0, slash), &pos);
      double b = std::stod(s.substr(slash + 1), &p2);
      if (pos != slash || p2 != s.size() - slash - 1) throw std::invalid_argument(s);
      pos = s.size();
      v = a / b;
    }
  } catch (const std::logic_error&) {
    throw UsageError(std::string(what) + ": not a number: '" + s + "'");
  }
  if (pos != s.size() || !std::isfinite(v)) throw UsageError(std::string(what) + ": not a number: '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_real(item, what));
  return out;
}

json value_json(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? json("nan") : json(v > 0 ? "inf" : "-inf");
}

void emit(const json& j, const std::string& format) {
  if (format == "json") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string v = it->is_string() ? it->get<std::string>() : it->is_number() ? fmt(it->get<double>()) : it->dump();
    std::cout << it.key() << "\t" << v << "\n";
  }
}

// ---------------------------------------------------------------- compute

struct MahlerArgs {
  std::string family, alpha, route = "auto";
};

int cmd_mahler(const MahlerArgs& a, const std::string& format) {
  mlab::MahlerQuery q;
  try {
    q.family = mlab::parse_family(a.family);
    q.route = mlab::parse_route(a.route);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  q.alpha = parse_real(a.alpha, "--alpha");
  double value, err;
  std::string basis;
  if (q.route == mlab::Route::Direct) {
    auto r = mlab::mahler_direct_quad(q.family, q.alpha);
    value = r.value;
    err = r.err_estimate;
    basis = "quadrature";
  } else {
    value = mlab::mahler(q);
    err = std::abs(value - mlab::mahler_direct(q.family, q.alpha));
    basis = "difference from direct quadrature";
  }
  emit(json{{"quantity", "mahler"},
            {"family", mlab::family_name(q.family)},
            {"alpha", q.alpha},
            {"route", a.route},
            {"value", value_json(value)},
            {"err_estimate", value_json(err)},
            {"err_basis", basis}},
       format);
  return kOk;
}

struct LatticeArgs {
  std::string b, c, method = "integral", kernel = "auto";
  int N = 20;
  unsigned threads = 0;
  bool progress = false;
};

int cmd_lattice(const LatticeArgs& a, const std::string& format) {
  mlab::LatticeSumSpec s;
  try {
    s.b = mlab::parse_positive_rational(a.b);
    s.c = mlab::parse_positive_rational(a.c);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  json out{{"quantity", "lattice"}, {"b", s.b}, {"c", s.c}, {"method", a.method}};
  if (a.method == "integral") {
    auto r = mlab::F_integral_quad(s);
    out["value"] = value_json(r.value);
    out["err_estimate"] = value_json(r.err_estimate);
  } else if (a.method == "cube") {
    if (a.N < 0 || a.N > mlab::kCubeMaxN)
      throw UsageError("--N must be in [0, " + std::to_string(mlab::kCubeMaxN) + "]");
    mlab::CubeOptions opt;
    opt.threads = a.threads;
    opt.kernel = a.kernel == "scalar" ? mlab::CubeKernel::Scalar
                 : a.kernel == "avx2" ? mlab::CubeKernel::Avx2
                                      : mlab::CubeKernel::Auto;
    std::mutex io;
    bool finished = false;
    if (a.progress)
      opt.progress = [&](double f) {
        std::lock_guard<std::mutex> lk(io);
        if (finished) return;
        std::fprintf(stderr, "\rcube rows %5.1f%%", 100 * f);
        if (f >= 1.0) {
          std::fprintf(stderr, "\n");
          finished = true;
        }
      };
    double v = mlab::F_cube(s, a.N, opt);
    out["N"] = a.N;
    out["value"] = value_json(v);
    out["err_estimate"] = value_json(std::abs(v - mlab::F_integral(s)));
    out["err_basis"] = "difference from the integral route";
  } else {
    throw UsageError("--method must be integral or cube");
  }
  emit(out, format);
  return kOk;
}

int cmd_lvalue(int conductor, const std::string& format) {
  if (conductor != 20 && conductor != 24 && conductor != 27 && conductor != 36)
    throw UsageError("--conductor must be one of 20, 24, 27, 36");
  auto r = mlab::L_elliptic_quad(conductor);
  emit(json{{"quantity", "lvalue"},
            {"conductor", conductor},
            {"value", value_json(r.value)},
            {"err_estimate", value_json(r.err_estimate)}},
       format);
  return kOk;
}

struct HyperArgs {
  std::string upper, lower, z;
};

int cmd_hyper(const HyperArgs& a, const std::string& format) {
  mlab::HypSpec h{parse_list(a.upper, "--upper"), parse_list(a.lower, "--lower"), parse_real(a.z, "--z")};
  mlab::PfqResult r;
  try {
    r = mlab::pfq_detail(h);
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  emit(json{{"quantity", "hyper"},
            {"upper", h.upper},
            {"lower", h.lower},
            {"z", h.z},
            {"value", value_json(r.value)},
            {"err_estimate", value_json(r.err_estimate)}},
       format);
  return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string id, tag;
  bool all = false;
  std::optional<double> tol;
  unsigned parallelism = 0;
};

const char* status_label(const mlab::VerifyReport& r) {
  switch (r.status) {
    case mlab::Status::Pass: return "PASS ";
    case mlab::Status::Fail: return "FAIL ";
    case mlab::Status::Error: return "ERROR";
  }
  return "ERROR";
}

int cmd_verify(const VerifyArgs& a, const std::string& format) {
  int chosen = (!a.id.empty()) + (!a.tag.empty()) + a.all;
  if (chosen > 1) throw UsageError("use only one of --id, --tag, --all");
  std::vector<mlab::IdentityRecord> recs;
  if (!a.id.empty()) {
    try {
      recs.push_back(mlab::find_identity(a.id));
    } catch (const std::out_of_range& e) {
      throw UsageError(e.what());
    }
  } else {
    recs = mlab::list_identities(a.tag.empty() ? "all" : a.tag);
    if (recs.empty()) throw UsageError("no identities tagged '" + a.tag + "'");
  }
  if (a.tol) {
    if (!(*a.tol > 0)) throw UsageError("--tol must be positive");
    for (auto& r : recs)
      if (r.kind == mlab::IdentityKind::Numeric) r.tolerance = *a.tol;
  }
  auto run = mlab::run_records(recs, a.parallelism);
  const auto& s = run.summary;
  bool any_control = false;
  for (const auto& r : run.reports) any_control |= r.negative_control;

  if (format == "json") {
    if (!a.id.empty()) {
      std::cout << mlab::to_json(run.reports.front()).dump(2) << "\n";
    } else {
      json arr = json::array();
      for (const auto& r : run.reports) arr.push_back(mlab::to_json(r));
      json summary{{"pass", s.pass},
                   {"fail", s.fail},
                   {"error", s.error},
                   {"control_fail", s.control_fail},
                   {"control_pass", s.control_pass},
                   {"noncontrol_bad", s.noncontrol_bad}};
      std::cout << json{{"reports", arr}, {"summary", summary}}.dump(2) << "\n";
    }
  } else if (format == "csv") {
    std::cout << mlab::csv_header() << "\n";
    for (const auto& r : run.reports) std::cout << mlab::to_csv(r) << "\n";
  } else {
    for (const auto& r : run.reports) {
      std::printf("%s %-28s abs_err=%-11.3e tol=%-9.2e %7.2fs  %s%s\n", status_label(r), r.id.c_str(), r.abs_err,
                  r.tol, r.seconds, r.negative_control ? "[control] " : "", r.message.c_str());
    }
    std::printf("summary: %d pass, %d fail, %d error; controls failed %d/%d; non-control failures %d\n", s.pass,
                s.fail, s.error, s.control_fail, s.control_fail + s.control_pass, s.noncontrol_bad);
  }
  std::fflush(stdout);
  // A selected negative control makes the run unclean by construction.
  return (s.noncontrol_bad == 0 && !any_control) ? kOk : kFailure;
}

// ---------------------------------------------------------------- series, list

int cmd_series(const std::string& expr, long terms, bool extended, bool dense) {
  if (terms < 0) throw UsageError("--terms must be non-negative");
  mlab::Expr e = mlab::parse_expr(expr, extended);
  auto s = mlab::series_of(e, terms);
  if (dense) {
    for (long k = 0; k < terms * s.denom(); ++k) {
      mpq_class x(k, s.denom());
      x.canonicalize();
      std::cout << x.get_num().get_str() << "/" << x.get_den().get_str() << "\t" << s.coeff(x).get_str() << "\n";
    }
    return kOk;
  }
  for (const auto& [x, c] : s.list()) {
    if (c == 0) continue;
    std::cout << x.get_num().get_str() << "/" << x.get_den().get_str() << "\t" << c.get_str() << "\n";
  }
  return kOk;
}

int cmd_list(const std::string& tag, const std::string& format) {
  auto recs = mlab::list_identities(tag);
  if (format == "json") {
    json arr = json::array();
    for (const auto& r : recs)
      arr.push_back({{"id", r.id},
                     {"description", r.description},
                     {"paper_ref", r.paper_ref},
                     {"kind", r.kind == mlab::IdentityKind::ExactSeries ? "exact_series" : "numeric"},
                     {"params", r.params},
                     {"tolerance", r.tolerance},
                     {"tags", r.tags}});
    std::cout << arr.dump(2) << "\n";
    return kOk;
  }
  for (const auto& r : recs) {
    std::string tags;
    for (const auto& t : r.tags) tags += (tags.empty() ? "" : ",") + t;
    std::cout << r.id << "\t" << (r.kind == mlab::IdentityKind::ExactSeries ? "exact" : "numeric") << "\t" << tags
              << "\t" << r.description << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mahler measures, elliptic L-values, lattice sums and identity checks"};
  app.require_subcommand(1);
  std::string format = "text";
  auto add_format = [&](CLI::App* sub, bool csv) {
    std::vector<std::string> fmts = {"text", "json"};
    if (csv) fmts.push_back("csv");
    sub->add_option("--format", format, "output format")->check(CLI::IsMember(fmts));
  };

  auto* compute = app.add_subcommand("compute", "evaluate a single quantity");
  compute->require_subcommand(1);

  MahlerArgs ma;
  auto* mahler = compute->add_subcommand("mahler", "Mahler measure m, g or n");
  mahler->add_option("--family", ma.family, "m, g or n")->required();
  mahler->add_option("--alpha", ma.alpha, "parameter (decimal or p/q)")->required();
  mahler->add_option("--route", ma.route, "auto, direct, hyper or j");
  add_format(mahler, false);

  LatticeArgs la;
  auto* lattice = compute->add_subcommand("lattice", "lattice sum F(b, c)");
  lattice->add_option("--b", la.b, "positive rational")->required();
  lattice->add_option("--c", la.c, "positive rational")->required();
  lattice->add_option("--method", la.method, "integral or cube")->check(CLI::IsMember({"integral", "cube"}));
  lattice->add_option("--N", la.N, "cube half-width");
  lattice->add_option("--threads", la.threads, "worker threads for the cube sum");
  lattice->add_option("--kernel", la.kernel, "auto, scalar or avx2")->check(CLI::IsMember({"auto", "scalar", "avx2"}));
  lattice->add_flag("--progress", la.progress, "report cube progress on stderr");
  add_format(lattice, false);

  int conductor = 0;
  auto* lvalue = compute->add_subcommand("lvalue", "L(E, 2) for conductor 20, 24, 27 or 36");
  lvalue->add_option("--conductor", conductor)->required();
  add_format(lvalue, false);

  HyperArgs ha;
  auto* hyper = compute->add_subcommand("hyper", "generalized hypergeometric pFq");
  hyper->add_option("--upper", ha.upper, "comma separated")->required();
  hyper->add_option("--lower", ha.lower, "comma separated");
  hyper->add_option("--z", ha.z)->required();
  add_format(hyper, false);

  VerifyArgs va;
  double tol = 0;
  auto* verify = app.add_subcommand("verify", "run catalog identities");
  verify->add_option("--id", va.id);
  verify->add_option("--tag", va.tag);
  verify->add_flag("--all", va.all);
  auto* tol_opt = verify->add_option("--tol", tol, "override numeric tolerances");
  verify->add_option("--parallelism", va.parallelism, "worker count (default MLAB_PARALLELISM or cores)")
      ->check(CLI::PositiveNumber);
  add_format(verify, true);

  std::string expr;
  long terms = 20;
  bool extended = false, dense = false;
  auto* series = app.add_subcommand("series", "expand an eta-type expression");
  series->add_option("--expr", expr)->required();
  series->add_option("--terms", terms, "expand to O(q^terms)");
  series->add_flag("--extended", extended, "accept the extended vocabulary");
  series->add_flag("--dense", dense, "print zero coefficients too");

  std::string list_tag;
  auto* list = app.add_subcommand("list", "list catalog identities");
  list->add_option("--tag", list_tag);
  add_format(list, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*mahler) return cmd_mahler(ma, format);
    if (*lattice) return cmd_lattice(la, format);
    if (*lvalue) return cmd_lvalue(conductor, format);
    if (*hyper) return cmd_hyper(ha, format);
    if (*verify) {
      if (*tol_opt) va.tol = tol;
      return cmd_verify(va, format);
    }
    if (*series) return cmd_series(expr, terms, extended, dense);
    if (*list) return cmd_list(list_tag, format);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const mlab::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
