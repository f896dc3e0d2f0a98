#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "vocic/hall_cache.hpp"
#include "vocic/verify.hpp"

namespace vocic {

struct cli_config {
  std::string format = "json";  // json | csv | pretty
  std::string cache_path;       // empty = no persistent cache
  unsigned threads = 1;         // 0 = one worker per hardware thread
  int max_total_dim = 6;        // ceiling for the Hall-algebra commands
  int extra_primes = 1;         // held-out consistency primes

  hall_options make_hall_options(std::shared_ptr<hall_cache> cache) const {
    hall_options h;
    h.extra_primes = extra_primes;
    h.threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    h.cache = std::move(cache);
    return h;
  }
};

namespace cli_detail {

using ordered_json = nlohmann::ordered_json;

inline std::string ints_spaced(const std::vector<int>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ' ';
    os << v[i];
  }
  return os.str();
}

inline long long small_int(const mpz_class& z) {
  if (!z.fits_slong_p()) fail(errkind::internal, "coefficient exceeds the integer output range");
  return (long long)z.get_si();
}

inline ordered_json poly_coeffs(const qpoly& p) {
  ordered_json a = ordered_json::array();
  for (const auto& c : p.coeffs()) a.push_back(small_int(c));
  if (a.empty()) a.push_back(0);
  return a;
}

inline ordered_json element_terms(const hall_element& e) {
  ordered_json a = ordered_json::array();
  for (const auto& [cls, coeff] : e.terms()) {
    ordered_json t;
    t["class"] = cls.str();
    t["coeff"] = coeff.str();
    a.push_back(t);
  }
  return a;
}

inline void write_element(const cli_config& cfg, const hall_element& e,
                          const std::function<void(ordered_json&)>& add_header,
                          std::ostream& out) {
  if (cfg.format == "json") {
    ordered_json j;
    add_header(j);
    j["terms"] = element_terms(e);
    out << j.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    out << "class,coeff\n";
    for (const auto& [cls, coeff] : e.terms()) out << cls.str() << "," << coeff.str() << "\n";
  } else {
    out << e.str() << "\n";
  }
}

inline void cmd_components(const cli_config& cfg, const dimvec& dim, std::ostream& out) {
  auto comps = enumerate_components(dim);
  if (cfg.format == "json") {
    ordered_json j;
    j["dim"] = dim;
    j["components"] = ordered_json::array();
    for (const auto& c : comps) {
      ordered_json jc;
      jc["r"] = c.r;
      jc["h"] = c.h;
      jc["omega"] = omega(c);
      j["components"].push_back(jc);
    }
    out << j.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    out << "r,h,omega\n";
    for (const auto& c : comps)
      out << ints_spaced(c.r) << "," << ints_spaced(c.h) << "," << ints_spaced(omega(c))
          << "\n";
  } else {
    out << "d=(" << detail::join_ints(dim) << ")  components: " << comps.size() << "\n";
    for (const auto& c : comps)
      out << "  r=(" << detail::join_ints(c.r) << ")  h=(" << detail::join_ints(c.h)
          << ")  marked=(" << detail::join_ints(omega(c)) << ")\n";
  }
}

inline void cmd_stalks(const cli_config& cfg, const dimvec& dim, const std::vector<int>& r,
                       std::ostream& out) {
  stalk_table table = build_stalk_table(make_complex(dim, r));
  const complex_type& c = table.component;
  if (cfg.format == "json") {
    ordered_json j;
    j["dim"] = c.d;
    j["r"] = c.r;
    j["h"] = c.h;
    j["rows"] = ordered_json::array();
    for (const auto& row : table.rows) {
      ordered_json jr;
      jr["k"] = row.k;
      jr["orbit_r"] = row.orbit.r;
      jr["orbit_h"] = row.orbit.h;
      jr["poincare"] = poly_coeffs(row.poincare);
      jr["codim"] = row.codim;
      j["rows"].push_back(jr);
    }
    out << j.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    out << "k,orbit_r,orbit_h,codim,poincare\n";
    for (const auto& row : table.rows)
      out << ints_spaced(row.k) << "," << ints_spaced(row.orbit.r) << ","
          << ints_spaced(row.orbit.h) << "," << row.codim << "," << row.poincare.str()
          << "\n";
  } else {
    out << "d=(" << detail::join_ints(c.d) << ")  r=(" << detail::join_ints(c.r) << ")  h=("
        << detail::join_ints(c.h) << ")\n";
    for (const auto& row : table.rows)
      out << "  k=(" << detail::join_ints(row.k) << ")  orbit r=("
          << detail::join_ints(row.orbit.r) << ") h=(" << detail::join_ints(row.orbit.h)
          << ")  codim=" << row.codim << "  poincare=" << row.poincare.str() << "\n";
  }
}

inline void cmd_canonical(const cli_config& cfg, const dimvec& dim, const std::vector<int>& r,
                          const std::shared_ptr<hall_cache>& cache, std::ostream& out) {
  if (total(dim) > cfg.max_total_dim)
    fail(errkind::ceiling, "total dimension " + std::to_string(total(dim)) +
                               " exceeds --max-total-dim " +
                               std::to_string(cfg.max_total_dim));
  complex_type c = make_complex(dim, r);
  hall_context ctx((int)dim.size(), cfg.make_hall_options(cache));
  hall_element e = component_element(ctx, c);
  write_element(cfg, e,
                [&](ordered_json& j) {
                  j["dim"] = c.d;
                  j["r"] = c.r;
                  j["h"] = c.h;
                },
                out);
}

inline void cmd_hall(const cli_config& cfg, int n, const std::string& lhs_text,
                     const std::string& rhs_text, const std::shared_ptr<hall_cache>& cache,
                     std::ostream& out) {
  multisegment lhs = multisegment::parse(lhs_text, n);
  multisegment rhs = multisegment::parse(rhs_text, n);
  int tot = total(lhs.dim()) + total(rhs.dim());
  if (tot > cfg.max_total_dim)
    fail(errkind::ceiling, "total dimension " + std::to_string(tot) +
                               " exceeds --max-total-dim " +
                               std::to_string(cfg.max_total_dim));
  hall_context ctx(n, cfg.make_hall_options(cache));
  hall_element prod = ctx.multiply(hall_element::basis(lhs), hall_element::basis(rhs));
  write_element(cfg, prod,
                [&](ordered_json& j) {
                  j["n"] = n;
                  j["lhs"] = lhs.str();
                  j["rhs"] = rhs.str();
                },
                out);
}

// The report is always emitted as JSON on stdout: it is the machine-readable
// failure list.  Pretty mode adds a human summary on the diagnostic stream.
inline int cmd_verify(const cli_config& cfg, const std::shared_ptr<hall_cache>& cache,
                      std::ostream& out, std::ostream& err) {
  verify_options vo;
  vo.max_total_dim = cfg.max_total_dim;
  vo.hall = cfg.make_hall_options(cache);
  verify_report rep = run_verify(vo);

  ordered_json j;
  j["bounds"]["max_total_dim"] = rep.max_total_dim;
  j["suites"] = ordered_json::array();
  for (const auto& s : rep.suites) {
    ordered_json js;
    js["name"] = s.name;
    js["checks"] = s.checks;
    js["failures"] = s.failures;
    j["suites"].push_back(js);
  }
  j["failures_total"] = rep.failures_total();
  out << j.dump(2) << "\n";

  if (cfg.format == "pretty") {
    for (const auto& s : rep.suites)
      err << s.name << ": checks=" << s.checks << " failures=" << s.failures.size() << "\n";
    err << (rep.ok() ? "all suites passed" : "verification failed") << "\n";
  }
  return rep.ok() ? 0 : 3;
}

}  // namespace cli_detail

// Parses and runs one command line.  Returns the process exit code; data goes
// to out, diagnostics to err.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"orbit components, stalk tables and Hall-algebra elements for "
               "varieties of complexes"};
  app.name("vocic");
  cli_config cfg;

  app.add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "pretty"}))
      ->capture_default_str();
  app.add_option("--cache", cfg.cache_path,
                 "structure-constant cache file (also read from VOCIC_CACHE)")
      ->envname("VOCIC_CACHE");
  app.add_option("--threads", cfg.threads, "worker threads, 0 = auto")
      ->capture_default_str();
  app.add_option("--max-total-dim", cfg.max_total_dim,
                 "ceiling on total dimension for Hall-algebra commands")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();
  app.add_option("--seed-extra-primes", cfg.extra_primes,
                 "extra held-out primes checked after interpolation")
      ->check(CLI::Range(0, 20))
      ->capture_default_str();
  app.require_subcommand(1);

  dimvec dim;
  std::vector<int> rvec;
  std::string lhs, rhs;
  int hall_n = 0;

  CLI::App* c_components =
      app.add_subcommand("components", "list the irreducible components for a dimension vector");
  c_components->add_option("--dim", dim, "comma separated dimension vector")
      ->required()
      ->delimiter(',');

  CLI::App* c_stalks =
      app.add_subcommand("stalks", "stalk polynomial table for one component");
  c_stalks->add_option("--dim", dim, "comma separated dimension vector")
      ->required()
      ->delimiter(',');
  c_stalks->add_option("--r", rvec, "rank vector of the component (length n-1)")
      ->required()
      ->delimiter(',');

  CLI::App* c_canonical =
      app.add_subcommand("canonical", "canonical-basis element attached to one component");
  c_canonical->add_option("--dim", dim, "comma separated dimension vector")
      ->required()
      ->delimiter(',');
  c_canonical->add_option("--r", rvec, "rank vector of the component (length n-1)")
      ->required()
      ->delimiter(',');

  CLI::App* c_hall = app.add_subcommand("hall", "product of two basis classes");
  c_hall->add_option("--n", hall_n, "ambient quiver rank")->required()->check(CLI::Range(1, 64));
  c_hall->add_option("--lhs", lhs, "left factor, e.g. \"[1..1]^2+[2..3]\"")->required();
  c_hall->add_option("--rhs", rhs, "right factor")->required();

  CLI::App* c_verify =
      app.add_subcommand("verify", "run the property and oracle suites within the ceiling");

  for (CLI::App* sub : {c_components, c_stalks, c_canonical, c_hall, c_verify})
    sub->fallthrough();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    for (int x : dim)
      if (x < 0) fail(errkind::infeasible, "negative entry in --dim");
    std::shared_ptr<hall_cache> cache;
    if (!cfg.cache_path.empty()) {
      cache = std::make_shared<hall_cache>();
      cache->load(cfg.cache_path);
    }
    int code = 0;
    if (c_components->parsed()) {
      cli_detail::cmd_components(cfg, dim, out);
    } else if (c_stalks->parsed()) {
      cli_detail::cmd_stalks(cfg, dim, rvec, out);
    } else if (c_canonical->parsed()) {
      cli_detail::cmd_canonical(cfg, dim, rvec, cache, out);
    } else if (c_hall->parsed()) {
      cli_detail::cmd_hall(cfg, hall_n, lhs, rhs, cache, out);
    } else if (c_verify->parsed()) {
      code = cli_detail::cmd_verify(cfg, cache, out, err);
    }
    if (cache) cache->save_new(cfg.cache_path);
    return code;
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace vocic
