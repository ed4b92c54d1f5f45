// pslet: energies, table reproduction, oracle verification and wavefunctions for
// V(q) = c1 q^2 + c2 q^-b in D dimensions.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pslet/errors.hpp"
#include "pslet/output.hpp"
#include "pslet/runner.hpp"

namespace {

enum ExitCode { kOk = 0, kToleranceFailure = 1, kConfigError = 2, kEngineFailure = 3 };

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

int parse_int(const std::string& s) {
  std::size_t pos = 0;
  const int v = std::stoi(s, &pos);
  if (pos != s.size()) throw pslet::DomainError("not an integer: '" + s + "'");
  return v;
}

double parse_real(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw pslet::DomainError("not a number: '" + s + "'");
  return v;
}

/// "3", "2:10" (inclusive) or "0,1,4".
std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (const std::string& part : split(s, ',')) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) {
      out.push_back(parse_int(part));
      continue;
    }
    const int a = parse_int(part.substr(0, colon));
    const int b = parse_int(part.substr(colon + 1));
    if (b < a) throw pslet::DomainError("empty range '" + part + "'");
    for (int v = a; v <= b; ++v) out.push_back(v);
  }
  if (out.empty()) throw pslet::DomainError("empty list");
  return out;
}

/// "10" or "1000,100,10"; "a:b" means the two endpoints.
std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  for (const std::string& part : split(s, ',')) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) {
      out.push_back(parse_real(part));
    } else {
      out.push_back(parse_real(part.substr(0, colon)));
      out.push_back(parse_real(part.substr(colon + 1)));
    }
  }
  if (out.empty()) throw pslet::DomainError("empty list");
  return out;
}

struct Options {
  std::string c1, c2 = "0", b = "2", A, k = "0", l = "0", D = "3";
  bool refine = false;
  bool dni = false;
  int n_max = pslet::kDefaultEnergyOrder;
  std::string pade = "4,4";
  std::string convention = "hall-saad";
  std::string format = "csv";
  std::string out;
  double tol = 1e-6;
  int threads = 0;
  std::string table = "all";
  double q_lo = 0.0, q_hi = 0.0;
  int points = 401;
};

pslet::RunRequest build_request(const Options& o) {
  pslet::RunRequest r;
  r.convention = *pslet::parse_convention(o.convention);
  if (!o.c1.empty()) r.c1 = parse_real(o.c1);
  r.c2 = parse_real_list(o.c2);
  r.b = parse_real_list(o.b);
  r.k = parse_int_list(o.k);
  r.l = parse_int_list(o.l);
  r.D = parse_int_list(o.D);
  r.refine = o.refine || !o.A.empty();
  if (!o.A.empty()) r.A = parse_real(o.A);
  r.energy_order = o.n_max;
  const std::vector<std::string> nm = split(o.pade, ',');
  if (nm.size() != 2) throw pslet::DomainError("--pade expects N,M");
  r.pade_N = parse_int(nm[0]);
  r.pade_M = parse_int(nm[1]);
  r.with_dni = o.dni;
  r.tolerance = o.tol;
  r.threads = o.threads;
  r.validate();
  return r;
}

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw pslet::DomainError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

int worst(int a, int b) {
  auto rank = [](int c) { return c == kEngineFailure ? 3 : c == kConfigError ? 2 : c == kToleranceFailure ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

int engine_status(const std::vector<pslet::EnergyRecord>& recs) {
  for (const auto& r : recs)
    if (!r.ok()) return kEngineFailure;
  return kOk;
}

int cmd_energy(const Options& o) {
  const pslet::RunRequest req = build_request(o);
  const auto recs = pslet::run_energy(req);
  Sink sink(o.out);
  pslet::write_energy(sink.stream(), recs, *pslet::parse_format(o.format), req.convention);
  for (const auto& r : recs) {
    if (!r.error.empty()) std::cerr << "engine failure k=" << r.job.state.k << " l=" << r.job.state.l
                                    << " D=" << r.job.state.D << ": " << r.error << '\n';
    if (!r.oracle_failure.empty()) std::cerr << "oracle failure: " << r.oracle_failure << '\n';
  }
  return engine_status(recs);
}

int cmd_verify(const Options& o) {
  const pslet::RunRequest req = build_request(o);
  const auto recs = pslet::run_verify(req);
  Sink sink(o.out);
  pslet::write_verify(sink.stream(), recs, *pslet::parse_format(o.format), req.convention);
  int status = kOk;
  std::size_t within = 0;
  for (const auto& v : recs) {
    if (!v.pslet.ok()) {
      status = worst(status, kEngineFailure);
      std::cerr << "failure: " << v.pslet.error << v.pslet.oracle_failure << '\n';
    } else if (!v.within_tolerance) {
      status = worst(status, kToleranceFailure);
    }
    within += v.within_tolerance;
  }
  std::cerr << within << "/" << recs.size() << " states within tol " << req.tolerance << '\n';
  return status;
}

int cmd_table(const Options& o, bool machine_output) {
  std::vector<int> ids;
  if (o.table == "all") {
    ids = {1, 2, 3, 4, 5};
  } else {
    ids = parse_int_list(o.table);
    for (int id : ids)
      if (id < 1 || id > 5) throw pslet::DomainError("table id must be 1..5 or 'all'");
  }
  std::optional<Sink> sink;
  if (machine_output) sink.emplace(o.out);
  int status = kOk;
  for (int id : ids) {
    const pslet::TableReport rep = pslet::run_table(id, o.threads);
    if (machine_output) pslet::write_table_cells(sink->stream(), rep, *pslet::parse_format(o.format));
    if (!machine_output || !o.out.empty()) std::cout << pslet::format_table_text(rep) << '\n';
    status = worst(status, engine_status(rep.records));
    if (!rep.pass()) status = worst(status, kToleranceFailure);
  }
  return status;
}

int cmd_wavefunction(const Options& o) {
  pslet::WavefunctionRequest req;
  req.run = build_request(o);
  if (o.q_lo > 0.0) req.q_lo = o.q_lo;
  if (o.q_hi > 0.0) req.q_hi = o.q_hi;
  req.points = o.points;
  const pslet::WavefunctionReport rep = pslet::run_wavefunction(req);
  Sink sink(o.out);
  pslet::write_wavefunction(sink.stream(), rep, *pslet::parse_format(o.format), req.run.convention);
  if (!rep.warning.empty()) std::cerr << "warning: " << rep.warning << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shifted-l pseudoperturbation spectra of D-dimensional spiked oscillators"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file with any of the options below; flags win");

  Options o;
  app.add_option("--c1", o.c1, "q^2 coupling (default: oscillator q^2/2 in the chosen convention)");
  app.add_option("--c2", o.c2, "spike coupling, value or comma list")->capture_default_str();
  app.add_option("--b", o.b, "spike exponent, value or comma list")->capture_default_str();
  app.add_option("--A", o.A, "inverse-square refinement strength (implies --refine)");
  app.add_flag("--refine", o.refine, "apply the A refinement with A = c2 unless --A is given");
  app.add_option("--k", o.k, "node count, value, a:b range or list")->capture_default_str();
  app.add_option("--l", o.l, "orbital number, value, a:b range or list")->capture_default_str();
  app.add_option("--D", o.D, "dimension, value, a:b range or list")->capture_default_str();
  app.add_option("--n-max", o.n_max, "highest energy correction order")->capture_default_str();
  app.add_option("--pade", o.pade, "Pade orders N,M")->capture_default_str();
  app.add_option("--convention", o.convention, "unit convention")
      ->check(CLI::IsMember({"hall-saad", "schrodinger-half"}))
      ->capture_default_str();
  auto* fmt = app.add_option("--format", o.format, "output format")
                  ->check(CLI::IsMember({"csv", "json"}))
                  ->capture_default_str();
  app.add_option("--out", o.out, "output file (default stdout)");
  app.add_option("--tol", o.tol, "tolerance for verify")->capture_default_str();
  app.add_option("--threads", o.threads, "worker threads, 0 = all cores")->capture_default_str();

  auto* energy = app.add_subcommand("energy", "PSLET energies for the requested states")->fallthrough();
  energy->add_flag("--dni", o.dni, "also run the finite-difference oracle");
  auto* table = app.add_subcommand("table", "reproduce a published table and diff against it")->fallthrough();
  table->add_option("id", o.table, "1..5, list, or 'all'")->capture_default_str();
  auto* verify = app.add_subcommand("verify", "compare PSLET with the oracle and closed forms")->fallthrough();
  auto* wave = app.add_subcommand("wavefunction", "sample the assembled wavefunction")->fallthrough();
  wave->add_option("--q-lo", o.q_lo, "grid start (default: trust region)");
  wave->add_option("--q-hi", o.q_hi, "grid end (default: trust region)");
  wave->add_option("--points", o.points, "grid points")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*energy) return cmd_energy(o);
    if (*table) return cmd_table(o, fmt->count() > 0 || !o.out.empty());
    if (*verify) return cmd_verify(o);
    if (*wave) return cmd_wavefunction(o);
  } catch (const pslet::DomainError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::out_of_range& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "engine failure: " << e.what() << '\n';
    return kEngineFailure;
  }
  return kConfigError;
}
