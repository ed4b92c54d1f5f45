#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pslet/dni.hpp"
#include "pslet/shift_frame.hpp"

namespace pslet {

/// How user-facing potential parameters and energies relate to the radial equation
/// -1/2 psi'' + [l_D (l_D + 1) / (2 q^2) + V(q)] psi = E psi.
enum class Convention {
  /// V = (c1 q^2 + c2 q^-b) / 2 and energies reported doubled (the table convention).
  HallSaad,
  /// V = c1 q^2 + c2 q^-b and energies reported as computed.
  SchrodingerHalf,
};

std::optional<Convention> parse_convention(std::string_view s);
std::string to_string(Convention c);

/// Multiplies radial-equation eigenvalues into reported energies.
double energy_scale(Convention c);

/// One potential + state to solve. Parameters are in the user convention.
struct Job {
  double c1 = 1.0;
  double c2 = 0.0;
  double b = 2.0;
  bool refine = false;
  double A = 0.0;
  StateSpec state;
  bool with_dni = false;
};

struct RunRequest {
  /// Defaults to the oscillator q^2 / 2 in either convention when unset.
  std::optional<double> c1;
  std::vector<double> c2{0.0};
  std::vector<double> b{2.0};
  bool refine = false;
  /// Refinement strength; defaults to c2 when refine is set.
  std::optional<double> A;
  std::vector<int> k{0};
  std::vector<int> l{0};
  std::vector<int> D{3};
  int energy_order = kDefaultEnergyOrder;
  int pade_N = 4;
  int pade_M = 4;
  Convention convention = Convention::HallSaad;
  bool with_dni = false;
  double tolerance = 1e-6;
  /// Worker threads; 0 picks the hardware concurrency.
  int threads = 0;
  DniConfig dni;

  double resolved_c1() const;
  /// Throws DomainError on an inconsistent request.
  void validate() const;
  /// Cartesian product ordered by (k, l, D), then c2 and b in the given order.
  std::vector<Job> jobs() const;
};

struct EnergyRecord {
  Job job;
  double l_D = 0.0;
  /// Angular number fed to the expansion (l_H when refined).
  double l_used = 0.0;
  double q_o = 0.0;
  double w = 0.0;
  double beta = 0.0;
  double lbar = 0.0;
  bool multiple_minima = false;
  /// Energies in the reporting convention.
  double leading = 0.0;
  double plain = 0.0;
  double e22 = 0.0;
  double e33 = 0.0;
  double e44 = 0.0;
  /// E[N,M] after the fallback ladder.
  double accelerated = 0.0;
  int accelerated_N = 0;
  int accelerated_M = 0;
  bool fallback = false;
  std::string fallback_reason;
  double staircase_spread = 0.0;
  bool stable = false;
  /// E^(n) in the reporting convention.
  std::vector<double> corrections;
  double max_order_residual = 0.0;
  std::optional<double> dni;
  std::optional<double> dni_error;
  /// Engine failure (no classical minimum, unstable well, degenerate recursion, ...).
  std::string error;
  std::string oracle_failure;

  bool ok() const { return error.empty() && oracle_failure.empty(); }
};

/// Solves one job; engine and oracle errors are recorded, not thrown.
EnergyRecord solve_job(const Job& job, Convention convention, int energy_order = kDefaultEnergyOrder,
                       int pade_N = 4, int pade_M = 4, const DniConfig& dni = {});

/// Solves every job on a bounded worker pool; output order equals input order.
std::vector<EnergyRecord> solve_jobs(const std::vector<Job>& jobs, Convention convention, int energy_order,
                                     int pade_N, int pade_M, const DniConfig& dni, int threads);

std::vector<EnergyRecord> run_energy(const RunRequest& req);

struct VerifyRecord {
  EnergyRecord pslet;
  std::optional<double> analytic;
  double dev_dni = 0.0;
  double rel_dev_dni = 0.0;
  std::optional<double> dev_analytic;
  bool within_tolerance = false;
};

/// 2k + l' + 3/2 times sqrt(2 c1) in the job's convention, when the spectrum is
/// exactly that of an oscillator (b = 2 or c2 = 0).
std::optional<double> analytic_energy(const Job& job, Convention convention);

std::vector<VerifyRecord> run_verify(const RunRequest& req);

struct WavefunctionRequest {
  RunRequest run;
  /// Grid bounds; unset means the trust region around q_o.
  std::optional<double> q_lo;
  std::optional<double> q_hi;
  int points = 401;
};

struct WavefunctionReport {
  EnergyRecord record;
  std::vector<double> q;
  std::vector<double> psi;
  int node_count = 0;
  double norm = 0.0;
  std::string warning;
};

WavefunctionReport run_wavefunction(const WavefunctionRequest& req);

struct TableCell {
  std::string row;
  std::string column;
  double computed = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  double diff = 0.0;
  bool pass = false;
};

struct TableCheck {
  std::string description;
  bool pass = false;
};

struct TableReport {
  int id = 0;
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::string> row_keys;
  std::vector<EnergyRecord> records;
  std::vector<TableCell> cells;
  /// Structural checks beyond cell diffs (degeneracy identities, closed forms).
  std::vector<TableCheck> checks;

  bool pass() const;
  /// Computed value of a cell, NaN when absent.
  double computed(const std::string& row, const std::string& column) const;
  const TableCell* cell(const std::string& row, const std::string& column) const;
};

TableReport run_table(int id, int threads = 0);

}  // namespace pslet
