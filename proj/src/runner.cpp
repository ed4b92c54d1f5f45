#include "pslet/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>
#include <tuple>

#include "pslet/errors.hpp"
#include "pslet/pade.hpp"
#include "pslet/reference_tables.hpp"
#include "pslet/riccati.hpp"

namespace pslet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Prepared {
  PotentialModel<double> model;
  PotentialModel<double> expansion_potential;
  double l_D;
  double l_used;
};

// Radial-equation potential and the (possibly refined) problem handed to the expansion.
Prepared prepare(const Job& job, Convention convention) {
  const double s = energy_scale(convention);
  PotentialModel<double> model(job.c1 / s, job.c2 / s, job.b);
  const double l_D = effective_l<double>(job.state);
  if (!job.refine) return {model, model, l_D, l_D};
  const RefinedProblem<double> r = apply_a_refinement(model, l_D, job.A);
  return {model, r.potential, l_D, r.l_H};
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::optional<Convention> parse_convention(std::string_view s) {
  if (s == "hall-saad") return Convention::HallSaad;
  if (s == "schrodinger-half") return Convention::SchrodingerHalf;
  return std::nullopt;
}

std::string to_string(Convention c) { return c == Convention::HallSaad ? "hall-saad" : "schrodinger-half"; }

double energy_scale(Convention c) { return c == Convention::HallSaad ? 2.0 : 1.0; }

double RunRequest::resolved_c1() const {
  if (c1) return *c1;
  return convention == Convention::HallSaad ? 1.0 : 0.5;
}

void RunRequest::validate() const {
  if (!(resolved_c1() > 0.0)) throw DomainError("c1 must be positive");
  if (c2.empty() || b.empty() || k.empty() || l.empty() || D.empty())
    throw DomainError("every parameter list needs at least one value");
  for (double v : c2)
    if (!(v >= 0.0)) throw DomainError("c2 must be non-negative");
  for (double v : b)
    if (!(v > 0.0)) throw DomainError("b must be positive");
  for (int v : k)
    if (v < 0) throw DomainError("k must be non-negative");
  for (int v : l)
    if (v < 0) throw DomainError("l must be non-negative");
  for (int v : D)
    if (v < 2) throw DomainError("D must be at least 2");
  if (A && !(*A >= 0.0)) throw DomainError("A must be non-negative");
  if (energy_order < 0) throw DomainError("n-max must be non-negative");
  if (pade_N < 0 || pade_M < 0) throw DomainError("Pade orders must be non-negative");
  if (pade_N + pade_M > energy_order)
    throw DomainError("Pade [" + std::to_string(pade_N) + "," + std::to_string(pade_M) + "] needs n-max >= " +
                      std::to_string(pade_N + pade_M));
  if (!(tolerance > 0.0)) throw DomainError("tol must be positive");
  if (threads < 0) throw DomainError("threads must be non-negative");
}

std::vector<Job> RunRequest::jobs() const {
  std::vector<Job> out;
  for (int kk : k)
    for (int ll : l)
      for (int dd : D)
        for (double cc : c2)
          for (double bb : b) {
            Job j;
            j.c1 = resolved_c1();
            j.c2 = cc;
            j.b = bb;
            j.refine = refine;
            j.A = refine ? A.value_or(cc) : 0.0;
            j.state = {kk, ll, dd};
            j.with_dni = with_dni;
            out.push_back(j);
          }
  std::stable_sort(out.begin(), out.end(), [](const Job& a, const Job& b) {
    return std::tie(a.state.k, a.state.l, a.state.D) < std::tie(b.state.k, b.state.l, b.state.D);
  });
  return out;
}

EnergyRecord solve_job(const Job& job, Convention convention, int energy_order, int pade_N, int pade_M,
                       const DniConfig& dni) {
  EnergyRecord rec;
  rec.job = job;
  rec.e22 = rec.e33 = rec.e44 = rec.accelerated = rec.plain = rec.leading = kNaN;
  const double s = energy_scale(convention);
  try {
    const Prepared pr = prepare(job, convention);
    rec.l_D = pr.l_D;
    rec.l_used = pr.l_used;
    RecursionOptions opts;
    opts.energy_order = energy_order;
    const PsletSolution<double> sol = solve_pslet(pr.expansion_potential, job.state.k, pr.l_used, opts);
    const auto& f = sol.frame;
    const auto& e = sol.energies;
    rec.q_o = f.q_o;
    rec.w = f.w;
    rec.beta = f.beta;
    rec.lbar = f.lbar;
    rec.multiple_minima = f.multiple_minima;
    rec.leading = s * e.leading();
    rec.plain = s * e.plain_sum();
    for (double c : e.corrections) rec.corrections.push_back(s * c);
    rec.max_order_residual = *std::max_element(e.order_residuals.begin(), e.order_residuals.end());

    const AcceleratedEnergy<double> acc = accelerate(e.corrections, e.leading(), e.lbar, pade_N, pade_M);
    rec.accelerated = s * acc.value;
    rec.accelerated_N = acc.N;
    rec.accelerated_M = acc.M;
    rec.fallback = acc.fallback;
    rec.fallback_reason = acc.reason;

    const int stair = std::min(4, energy_order / 2);
    if (stair >= 2) {
      const PadeStaircase<double> st = pade_staircase(e.corrections, e.leading(), e.lbar, stair, 1e-6 / s);
      rec.e22 = s * st.at(2);
      rec.e33 = s * st.at(3);
      rec.e44 = s * st.at(4);
      rec.staircase_spread = s * st.spread;
      rec.stable = st.stable;
    }
  } catch (const std::exception& ex) {
    rec.error = ex.what();
    return rec;
  }
  if (job.with_dni) {
    try {
      const Prepared pr = prepare(job, convention);
      const DniResult d = dni_eigenvalue(pr.model, pr.l_D, job.state.k, dni);
      rec.dni = s * d.energy;
      rec.dni_error = s * d.error_estimate;
    } catch (const std::exception& ex) {
      rec.oracle_failure = ex.what();
    }
  }
  return rec;
}

std::vector<EnergyRecord> solve_jobs(const std::vector<Job>& jobs, Convention convention, int energy_order,
                                     int pade_N, int pade_M, const DniConfig& dni, int threads) {
  std::vector<EnergyRecord> out(jobs.size());
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(threads > 0 ? static_cast<std::size_t>(threads) : hw, jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++)
      out[i] = solve_job(jobs[i], convention, energy_order, pade_N, pade_M, dni);
  };
  if (workers <= 1) {
    work();
    return out;
  }
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  return out;
}

std::vector<EnergyRecord> run_energy(const RunRequest& req) {
  req.validate();
  return solve_jobs(req.jobs(), req.convention, req.energy_order, req.pade_N, req.pade_M, req.dni, req.threads);
}

std::optional<double> analytic_energy(const Job& job, Convention convention) {
  if (!(job.b == 2.0 || job.c2 == 0.0)) return std::nullopt;
  const double s = energy_scale(convention);
  const double c1 = job.c1 / s;
  const double inverse_square = job.b == 2.0 ? job.c2 / s : 0.0;
  const double l_D = effective_l<double>(job.state);
  const double disc = (l_D + 0.5) * (l_D + 0.5) + 2.0 * inverse_square;
  const double l_prime = -0.5 + std::sqrt(disc);
  return s * std::sqrt(2.0 * c1) * (2.0 * job.state.k + l_prime + 1.5);
}

std::vector<VerifyRecord> run_verify(const RunRequest& req) {
  RunRequest r = req;
  r.with_dni = true;
  const std::vector<EnergyRecord> recs = run_energy(r);
  std::vector<VerifyRecord> out;
  for (const EnergyRecord& e : recs) {
    VerifyRecord v;
    v.pslet = e;
    v.analytic = analytic_energy(e.job, req.convention);
    bool ok = e.ok() && e.dni.has_value();
    if (e.dni) {
      v.dev_dni = std::abs(e.accelerated - *e.dni);
      v.rel_dev_dni = v.dev_dni / std::abs(*e.dni);
      ok = ok && v.dev_dni <= req.tolerance;
    }
    if (v.analytic && e.error.empty()) {
      v.dev_analytic = std::abs(e.accelerated - *v.analytic);
      ok = ok && *v.dev_analytic <= req.tolerance;
    }
    v.within_tolerance = ok;
    out.push_back(std::move(v));
  }
  return out;
}

WavefunctionReport run_wavefunction(const WavefunctionRequest& req) {
  req.run.validate();
  const std::vector<Job> jobs = req.run.jobs();
  if (jobs.size() != 1) throw DomainError("wavefunction needs exactly one state and one potential");
  if (req.points < 2) throw DomainError("wavefunction grid needs at least two points");
  WavefunctionReport rep;
  rep.record = solve_job(jobs[0], req.run.convention, req.run.energy_order, req.run.pade_N, req.run.pade_M);
  if (!rep.record.error.empty()) throw std::runtime_error(rep.record.error);

  const Prepared pr = prepare(jobs[0], req.run.convention);
  RecursionOptions opts;
  opts.energy_order = req.run.energy_order;
  const PsletSolution<double> sol = solve_pslet(pr.expansion_potential, jobs[0].state.k, pr.l_used, opts);
  const double q_o = sol.frame.q_o;
  const double lo = req.q_lo.value_or(q_o * (1.0 - kTrustRadius));
  const double hi = req.q_hi.value_or(q_o * (1.0 + kTrustRadius));
  if (!(lo > 0.0 && hi > lo)) throw DomainError("wavefunction grid needs 0 < q-lo < q-hi");
  std::vector<double> grid(static_cast<std::size_t>(req.points));
  for (int i = 0; i < req.points; ++i) grid[i] = lo + (hi - lo) * i / (req.points - 1);

  const WavefunctionSamples<double> w = assemble_wavefunction(sol.expansion, sol.frame, grid);
  rep.q = w.q;
  rep.psi = w.psi;
  rep.node_count = w.node_count;
  double norm = 0.0;
  for (std::size_t i = 0; i + 1 < w.q.size(); ++i)
    norm += 0.5 * (w.q[i + 1] - w.q[i]) * (w.psi[i] * w.psi[i] + w.psi[i + 1] * w.psi[i + 1]);
  rep.norm = norm;
  rep.warning = w.warning;
  return rep;
}

bool TableReport::pass() const {
  for (const auto& c : cells)
    if (!c.pass) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  for (const auto& r : records)
    if (!r.ok()) return false;
  return true;
}

const TableCell* TableReport::cell(const std::string& row, const std::string& column) const {
  for (const auto& c : cells)
    if (c.row == row && c.column == column) return &c;
  return nullptr;
}

double TableReport::computed(const std::string& row, const std::string& column) const {
  const TableCell* c = cell(row, column);
  return c ? c->computed : kNaN;
}

namespace {

struct TableBuilder {
  TableReport& rep;

  // Tolerance is the larger of the criterion and half a unit in the printed last place,
  // widened by the uncertainty of the computed value when it has one.
  void compare(const std::string& row, const std::string& column, double computed, double criterion = 0.0,
               double uncertainty = 0.0) {
    const auto ref = reference_value(rep.id, row, column);
    if (!ref) throw std::logic_error("missing reference cell " + row + " " + column);
    TableCell c;
    c.row = row;
    c.column = column;
    c.computed = computed;
    c.reference = ref->value;
    c.tolerance = std::max(criterion, ref->rounding()) + uncertainty;
    c.diff = std::abs(computed - ref->value);
    c.pass = c.diff <= c.tolerance;
    rep.cells.push_back(c);
  }

  void check(std::string description, bool pass) { rep.checks.push_back({std::move(description), pass}); }
};

Job hs_job(double c2, double b, int k, int l, int D, bool dni = false, double A = 0.0) {
  Job j;
  j.c1 = 1.0;
  j.c2 = c2;
  j.b = b;
  j.refine = A > 0.0;
  j.A = A;
  j.state = {k, l, D};
  j.with_dni = dni;
  return j;
}

bool same_energies(const EnergyRecord& a, const EnergyRecord& b) {
  return a.ok() && b.ok() && a.leading == b.leading && a.plain == b.plain && a.accelerated == b.accelerated &&
         a.corrections == b.corrections;
}

std::string state_label(const StateSpec& s) {
  return "(k=" + std::to_string(s.k) + ",l=" + std::to_string(s.l) + ",D=" + std::to_string(s.D) + ")";
}

std::vector<EnergyRecord> solve_table_jobs(const std::vector<Job>& jobs, int threads) {
  return solve_jobs(jobs, Convention::HallSaad, kDefaultEnergyOrder, 4, 4, DniConfig{}, threads);
}

void table1(TableReport& rep, int threads) {
  rep.title = "3D ground states, V = (q^2 + c2 q^-2.5) / 2";
  rep.columns = {"lbar2Em2", "EP", "E44", "EDNI"};
  const std::vector<std::pair<std::string, double>> rows = {{"1000", 1000},  {"100", 100},   {"10", 10},
                                                            {"1", 1},        {"0.1", 0.1},   {"0.01", 0.01},
                                                            {"0.001", 0.001}};
  std::vector<Job> jobs;
  for (const auto& [label, c2] : rows) jobs.push_back(hs_job(c2, 2.5, 0, 0, 3, true));
  rep.records = solve_table_jobs(jobs, threads);
  TableBuilder t{rep};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string row = "c2=" + rows[i].first;
    const EnergyRecord& r = rep.records[i];
    const double c2 = rows[i].second;
    rep.row_keys.push_back(row);
    t.compare(row, "lbar2Em2", r.leading, 5e-6);
    t.compare(row, "EP", r.plain);
    t.compare(row, "E44", r.accelerated, c2 >= 100 ? 5e-7 : c2 <= 1 ? 2e-3 : 0.0);
    t.compare(row, "EDNI", r.dni.value_or(kNaN), 0.0, r.dni_error.value_or(0.0));
  }
}

void table2(TableReport& rep, int threads) {
  rep.title = "D-dimensional ground states, V = (q^2 + 10 q^-1.9) / 2";
  rep.columns = {"lbar2Em2", "EP", "E44", "EDNI"};
  std::vector<Job> jobs;
  for (int D = 2; D <= 10; ++D) jobs.push_back(hs_job(10, 1.9, 0, 0, D, true));
  rep.records = solve_table_jobs(jobs, threads);
  TableBuilder t{rep};
  for (int D = 2; D <= 10; ++D) {
    const std::string row = "D=" + std::to_string(D);
    const EnergyRecord& r = rep.records[D - 2];
    rep.row_keys.push_back(row);
    t.compare(row, "lbar2Em2", r.leading);
    t.compare(row, "EP", r.plain);
    t.compare(row, "E44", r.accelerated, D == 2 ? 2e-5 : 5e-6);
    t.compare(row, "EDNI", r.dni.value_or(kNaN), 0.0, r.dni_error.value_or(0.0));
  }
}

void table3(TableReport& rep, int threads) {
  rep.title = "2D and 3D nodeless states, V = (q^2 + 1000 q^-b) / 2, E[4,4]";
  rep.columns = {"l=0", "l=1", "l=2", "l=3", "l=4"};
  const std::vector<double> bs = {0.5, 1, 1.5, 2, 2.5, 3};
  std::vector<Job> jobs;
  for (int D : {2, 3})
    for (double b : bs)
      for (int l = 0; l <= 4; ++l) jobs.push_back(hs_job(1000, b, 0, l, D, false, b == 2.0 ? 1000.0 : 0.0));
  rep.records = solve_table_jobs(jobs, threads);
  TableBuilder t{rep};
  std::size_t i = 0;
  for (int D : {2, 3})
    for (double b : bs) {
      const std::string row = "D=" + std::to_string(D) + ",b=" + format_number(b);
      rep.row_keys.push_back(row);
      for (int l = 0; l <= 4; ++l, ++i) {
        const EnergyRecord& r = rep.records[i];
        t.compare(row, "l=" + std::to_string(l), r.accelerated, 5e-6);
        if (b == 2.0) {
          const double exact = *analytic_energy(r.job, Convention::HallSaad);
          const double diff = std::abs(r.accelerated - exact);
          char buf[128];
          std::snprintf(buf, sizeof buf, "%s l=%d E[4,4] vs closed form 2(2k+l'+3/2): |diff| = %.2e <= 1e-9",
                        row.c_str(), l, diff);
          t.check(buf, diff <= 1e-9);
        }
      }
    }
}

void table4(TableReport& rep, int threads) {
  rep.title = "2D and 3D excited states, V = (q^2 + 1000 q^-1.5) / 2";
  rep.columns = {"lbar2Em2", "EP", "E44"};
  std::vector<Job> jobs;
  for (int k : {1, 2})
    for (int D : {2, 3})
      for (int l = 0; l <= (k == 1 ? 3 : 2); ++l) jobs.push_back(hs_job(1000, 1.5, k, l, D));
  const std::size_t shown = jobs.size();
  // Even-D partners (k, l - 1, D = 4) of the D = 2 rows.
  std::vector<std::size_t> partner_of;
  for (std::size_t i = 0; i < shown; ++i) {
    const StateSpec& s = jobs[i].state;
    if (s.D == 2 && s.l >= 1) {
      partner_of.push_back(i);
      jobs.push_back(hs_job(1000, 1.5, s.k, s.l - 1, 4));
    }
  }
  std::vector<EnergyRecord> all = solve_table_jobs(jobs, threads);
  TableBuilder t{rep};
  for (std::size_t i = 0; i < shown; ++i) {
    const StateSpec& s = jobs[i].state;
    const std::string row = "D=" + std::to_string(s.D) + ",k=" + std::to_string(s.k) + ",l=" + std::to_string(s.l);
    rep.row_keys.push_back(row);
    t.compare(row, "lbar2Em2", all[i].leading, 5e-5);
    t.compare(row, "EP", all[i].plain, 5e-5);
    t.compare(row, "E44", all[i].accelerated, 5e-5);
  }
  for (std::size_t p = 0; p < partner_of.size(); ++p) {
    const EnergyRecord& a = all[partner_of[p]];
    const EnergyRecord& b = all[shown + p];
    t.check(state_label(a.job.state) + " == " + state_label(b.job.state) + " bitwise", same_energies(a, b));
  }
  all.resize(shown);
  rep.records = std::move(all);
}

void table5(TableReport& rep, int threads) {
  rep.title = "k = 2, l = 1, 2 states with A = c2 refinement, V = (q^2 + 10 q^-2.1) / 2";
  rep.columns = {"E21ex", "E21P", "E21_44", "E22P", "E22_44"};
  std::vector<Job> jobs;
  for (int D = 2; D <= 10; ++D) jobs.push_back(hs_job(10, 2.1, 2, 1, D, true, 10.0));
  for (int D = 2; D <= 10; ++D) jobs.push_back(hs_job(10, 2.1, 2, 2, D, false, 10.0));
  rep.records = solve_table_jobs(jobs, threads);
  TableBuilder t{rep};
  for (int D = 2; D <= 10; ++D) {
    const std::string row = "D=" + std::to_string(D);
    const EnergyRecord& l1 = rep.records[D - 2];
    const EnergyRecord& l2 = rep.records[9 + D - 2];
    rep.row_keys.push_back(row);
    t.compare(row, "E21ex", l1.dni.value_or(kNaN), 0.0, l1.dni_error.value_or(0.0));
    t.compare(row, "E21P", l1.plain);
    t.compare(row, "E21_44", l1.accelerated, 5e-6);
    t.compare(row, "E22P", l2.plain);
    t.compare(row, "E22_44", l2.accelerated, 5e-6);
  }
  for (int D = 4; D <= 10; ++D) {
    const EnergyRecord& a = rep.records[D - 2];
    const EnergyRecord& b = rep.records[9 + D - 4];
    t.check(state_label(a.job.state) + " == " + state_label(b.job.state) + " bitwise", same_energies(a, b));
  }
}

}  // namespace

TableReport run_table(int id, int threads) {
  TableReport rep;
  rep.id = id;
  switch (id) {
    case 1: table1(rep, threads); break;
    case 2: table2(rep, threads); break;
    case 3: table3(rep, threads); break;
    case 4: table4(rep, threads); break;
    case 5: table5(rep, threads); break;
    default: throw DomainError("table id must be 1..5");
  }
  return rep;
}

}  // namespace pslet
