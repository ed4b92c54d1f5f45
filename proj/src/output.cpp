#include "pslet/output.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace pslet {

namespace {

using nlohmann::json;

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_optional(const std::optional<double>& v) { return v ? csv_number(*v) : ""; }

json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json json_optional(const std::optional<double>& v) { return v ? json_number(*v) : json(nullptr); }

const char* const kEnergyHeader =
    "k,l,D,c1,c2,b,refine,A,l_D,l_used,q_o,w,beta,lbar,multiple_minima,leading,plain,E22,E33,E44,"
    "accelerated,pade_N,pade_M,fallback,staircase_spread,stable,max_order_residual,dni,dni_error,error,"
    "oracle_failure,fallback_reason";

std::string energy_csv_row(const EnergyRecord& r) {
  const Job& j = r.job;
  std::ostringstream os;
  os << j.state.k << ',' << j.state.l << ',' << j.state.D << ',' << csv_number(j.c1) << ',' << csv_number(j.c2)
     << ',' << csv_number(j.b) << ',' << (j.refine ? 1 : 0) << ',' << csv_number(j.A) << ',' << csv_number(r.l_D)
     << ',' << csv_number(r.l_used) << ',' << csv_number(r.q_o) << ',' << csv_number(r.w) << ','
     << csv_number(r.beta) << ',' << csv_number(r.lbar) << ',' << (r.multiple_minima ? 1 : 0) << ','
     << csv_number(r.leading) << ',' << csv_number(r.plain) << ',' << csv_number(r.e22) << ','
     << csv_number(r.e33) << ',' << csv_number(r.e44) << ',' << csv_number(r.accelerated) << ','
     << r.accelerated_N << ',' << r.accelerated_M << ',' << (r.fallback ? 1 : 0) << ','
     << csv_number(r.staircase_spread) << ',' << (r.stable ? 1 : 0) << ',' << csv_number(r.max_order_residual)
     << ',' << csv_optional(r.dni) << ',' << csv_optional(r.dni_error) << ',' << csv_text(r.error) << ','
     << csv_text(r.oracle_failure) << ',' << csv_text(r.fallback_reason);
  return os.str();
}

json energy_json(const EnergyRecord& r, Convention convention) {
  const Job& j = r.job;
  json o;
  o["k"] = j.state.k;
  o["l"] = j.state.l;
  o["D"] = j.state.D;
  o["c1"] = j.c1;
  o["c2"] = j.c2;
  o["b"] = j.b;
  o["refine"] = j.refine;
  o["A"] = j.A;
  o["convention"] = to_string(convention);
  o["l_D"] = r.l_D;
  o["l_used"] = r.l_used;
  o["q_o"] = r.q_o;
  o["w"] = r.w;
  o["beta"] = r.beta;
  o["lbar"] = r.lbar;
  o["multiple_minima"] = r.multiple_minima;
  o["leading"] = json_number(r.leading);
  o["plain"] = json_number(r.plain);
  o["E22"] = json_number(r.e22);
  o["E33"] = json_number(r.e33);
  o["E44"] = json_number(r.e44);
  o["accelerated"] = json_number(r.accelerated);
  o["pade_N"] = r.accelerated_N;
  o["pade_M"] = r.accelerated_M;
  o["fallback"] = r.fallback;
  o["fallback_reason"] = r.fallback_reason;
  o["staircase_spread"] = json_number(r.staircase_spread);
  o["stable"] = r.stable;
  json corr = json::array();
  for (double c : r.corrections) corr.push_back(json_number(c));
  o["corrections"] = corr;
  o["max_order_residual"] = json_number(r.max_order_residual);
  o["dni"] = json_optional(r.dni);
  o["dni_error"] = json_optional(r.dni_error);
  o["error"] = r.error;
  o["oracle_failure"] = r.oracle_failure;
  return o;
}

}  // namespace

std::optional<Format> parse_format(std::string_view s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  return std::nullopt;
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_energy(std::ostream& os, const std::vector<EnergyRecord>& records, Format format, Convention convention) {
  if (format == Format::Json) {
    json arr = json::array();
    for (const auto& r : records) arr.push_back(energy_json(r, convention));
    os << arr.dump(2) << '\n';
    return;
  }
  os << "# convention=" << to_string(convention) << '\n' << kEnergyHeader << '\n';
  for (const auto& r : records) os << energy_csv_row(r) << '\n';
}

void write_verify(std::ostream& os, const std::vector<VerifyRecord>& records, Format format, Convention convention) {
  if (format == Format::Json) {
    json arr = json::array();
    for (const auto& v : records) {
      json o = energy_json(v.pslet, convention);
      o["analytic"] = json_optional(v.analytic);
      o["dev_dni"] = json_number(v.dev_dni);
      o["rel_dev_dni"] = json_number(v.rel_dev_dni);
      o["dev_analytic"] = json_optional(v.dev_analytic);
      o["within_tolerance"] = v.within_tolerance;
      arr.push_back(o);
    }
    os << arr.dump(2) << '\n';
    return;
  }
  os << "# convention=" << to_string(convention) << '\n'
     << kEnergyHeader << ",analytic,dev_dni,rel_dev_dni,dev_analytic,within_tolerance\n";
  for (const auto& v : records) {
    os << energy_csv_row(v.pslet) << ',' << csv_optional(v.analytic) << ',' << csv_number(v.dev_dni) << ','
       << csv_number(v.rel_dev_dni) << ',' << csv_optional(v.dev_analytic) << ',' << (v.within_tolerance ? 1 : 0)
       << '\n';
  }
}

void write_wavefunction(std::ostream& os, const WavefunctionReport& rep, Format format, Convention convention) {
  const Job& j = rep.record.job;
  if (format == Format::Json) {
    json o;
    o["state"] = energy_json(rep.record, convention);
    o["node_count"] = rep.node_count;
    o["norm"] = rep.norm;
    o["warning"] = rep.warning;
    json q = json::array(), psi = json::array();
    for (double v : rep.q) q.push_back(v);
    for (double v : rep.psi) psi.push_back(json_number(v));
    o["q"] = q;
    o["psi"] = psi;
    os << o.dump(2) << '\n';
    return;
  }
  os << "# k=" << j.state.k << " l=" << j.state.l << " D=" << j.state.D << " c1=" << csv_number(j.c1)
     << " c2=" << csv_number(j.c2) << " b=" << csv_number(j.b) << " convention=" << to_string(convention) << '\n'
     << "# q_o=" << csv_number(rep.record.q_o) << " lbar=" << csv_number(rep.record.lbar)
     << " energy=" << csv_number(rep.record.accelerated) << '\n'
     << "# node_count=" << rep.node_count << " norm=" << csv_number(rep.norm) << '\n';
  if (!rep.warning.empty()) os << "# warning=" << rep.warning << '\n';
  os << "q,psi\n";
  for (std::size_t i = 0; i < rep.q.size(); ++i) os << csv_number(rep.q[i]) << ',' << csv_number(rep.psi[i]) << '\n';
}

void write_table_cells(std::ostream& os, const TableReport& rep, Format format) {
  if (format == Format::Json) {
    json o;
    o["table"] = rep.id;
    o["title"] = rep.title;
    json cells = json::array();
    for (const auto& c : rep.cells)
      cells.push_back({{"row", c.row},
                       {"column", c.column},
                       {"computed", json_number(c.computed)},
                       {"reference", c.reference},
                       {"diff", json_number(c.diff)},
                       {"tolerance", c.tolerance},
                       {"pass", c.pass}});
    o["cells"] = cells;
    json checks = json::array();
    for (const auto& c : rep.checks) checks.push_back({{"description", c.description}, {"pass", c.pass}});
    o["checks"] = checks;
    o["pass"] = rep.pass();
    os << o.dump(2) << '\n';
    return;
  }
  os << "table,row,column,computed,reference,diff,tolerance,pass\n";
  for (const auto& c : rep.cells)
    os << rep.id << ',' << csv_text(c.row) << ',' << c.column << ',' << csv_number(c.computed) << ','
       << csv_number(c.reference) << ',' << csv_number(c.diff) << ',' << csv_number(c.tolerance) << ','
       << (c.pass ? 1 : 0) << '\n';
}

std::string format_table_text(const TableReport& rep) {
  std::ostringstream os;
  char buf[256];
  os << "Table " << rep.id << ": " << rep.title << " (hall-saad convention)\n";
  std::snprintf(buf, sizeof buf, "%-12s %-9s %15s %15s %10s %10s  %s\n", "row", "column", "computed", "printed",
                "|diff|", "tol", "status");
  os << buf;
  int passed = 0;
  for (const auto& c : rep.cells) {
    std::snprintf(buf, sizeof buf, "%-12s %-9s %15.7f %15.7f %10.1e %10.1e  %s\n", c.row.c_str(), c.column.c_str(),
                  c.computed, c.reference, c.diff, c.tolerance, c.pass ? "ok" : "FAIL");
    os << buf;
    passed += c.pass;
  }
  for (const auto& r : rep.records) {
    const StateSpec& s = r.job.state;
    std::snprintf(buf, sizeof buf, "(k=%d,l=%d,D=%d,c2=%g,b=%g)", s.k, s.l, s.D, r.job.c2, r.job.b);
    if (!r.error.empty()) os << "engine failure " << buf << ": " << r.error << '\n';
    if (!r.oracle_failure.empty()) os << "oracle failure " << buf << ": " << r.oracle_failure << '\n';
    if (r.fallback) os << "note " << buf << ": " << r.fallback_reason << '\n';
  }
  int checks_passed = 0;
  for (const auto& c : rep.checks) {
    os << (c.pass ? "ok   " : "FAIL ") << c.description << '\n';
    checks_passed += c.pass;
  }
  os << "Table " << rep.id << ": " << passed << "/" << rep.cells.size() << " cells within tolerance, "
     << checks_passed << "/" << rep.checks.size() << " checks -> " << (rep.pass() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

}  // namespace pslet
