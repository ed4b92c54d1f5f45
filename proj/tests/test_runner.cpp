#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "pslet/errors.hpp"
#include "pslet/output.hpp"
#include "pslet/reference_tables.hpp"
#include "pslet/runner.hpp"

using namespace pslet;

TEST_CASE("conventions") {
  CHECK(parse_convention("hall-saad") == Convention::HallSaad);
  CHECK(parse_convention("schrodinger-half") == Convention::SchrodingerHalf);
  CHECK_FALSE(parse_convention("nonsense"));
  CHECK(energy_scale(Convention::HallSaad) == 2.0);

  RunRequest hs;
  hs.c2 = {10.0};
  hs.b = {1.9};
  RunRequest sh = hs;
  sh.convention = Convention::SchrodingerHalf;
  sh.c2 = {5.0};
  const auto a = run_energy(hs), b = run_energy(sh);
  CHECK(a[0].accelerated == doctest::Approx(2 * b[0].accelerated).epsilon(1e-14));
}

TEST_CASE("request validation and ordering") {
  RunRequest r;
  r.k = {1, 0};
  r.l = {0, 1};
  r.D = {3, 2};
  r.c2 = {10.0};
  const auto jobs = r.jobs();
  REQUIRE(jobs.size() == 8);
  for (std::size_t i = 1; i < jobs.size(); ++i) {
    const auto& p = jobs[i - 1].state;
    const auto& q = jobs[i].state;
    CHECK(std::tie(p.k, p.l, p.D) < std::tie(q.k, q.l, q.D));
  }
  CHECK_NOTHROW(r.validate());

  RunRequest bad = r;
  bad.D = {1};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = r;
  bad.pade_N = 5;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = r;
  bad.b = {0.0};
  CHECK_THROWS_AS(bad.validate(), DomainError);

  RunRequest ref = r;
  ref.refine = true;
  CHECK(ref.jobs()[0].A == 10.0);
  ref.A = 3.0;
  CHECK(ref.jobs()[0].A == 3.0);
}

TEST_CASE("records carry the frame and embed failures") {
  Job j;
  j.c2 = 10;
  j.b = 1.9;
  j.state = {0, 0, 10};
  const auto r = solve_job(j, Convention::HallSaad);
  CHECK(r.ok());
  CHECK(r.l_D == 3.5);
  CHECK(r.q_o > 0);
  CHECK(r.lbar == doctest::Approx(r.l_D - r.beta));
  CHECK(std::abs(r.accelerated - 12.354183) < 5e-7);
  CHECK(r.corrections.size() == 9);

  Job broken = j;
  broken.c1 = 0.0;
  const auto f = solve_job(broken, Convention::HallSaad);
  CHECK_FALSE(f.ok());
  CHECK_FALSE(f.error.empty());
}

TEST_CASE("deterministic output regardless of worker count") {
  RunRequest r;
  r.c2 = {1000.0, 10.0};
  r.b = {1.5};
  r.k = {0, 1};
  r.l = {0, 2};
  r.D = {2, 3};
  r.threads = 1;
  std::ostringstream a, b, c;
  write_energy(a, run_energy(r), Format::Csv, r.convention);
  r.threads = 3;
  write_energy(b, run_energy(r), Format::Csv, r.convention);
  write_energy(c, run_energy(r), Format::Csv, r.convention);
  CHECK(a.str() == b.str());
  CHECK(b.str() == c.str());
}

TEST_CASE("verify against oracle and closed forms") {
  RunRequest r;
  r.c2 = {1000.0};
  r.b = {2.0};
  r.refine = true;
  r.l = {0, 1};
  r.D = {2, 3};
  r.tolerance = 1e-9;
  for (const auto& v : run_verify(r)) {
    REQUIRE(v.analytic);
    CHECK(*v.dev_analytic < 1e-9);
    CHECK(v.pslet.dni);
    CHECK(v.dev_dni < 1e-7);
  }
  RunRequest osc;
  osc.c2 = {0.0};
  osc.k = {0, 1, 2};
  osc.tolerance = 1e-9;
  for (const auto& v : run_verify(osc)) {
    CHECK(v.within_tolerance);
    CHECK(*v.analytic == doctest::Approx(2 * (2 * v.pslet.job.state.k + 1.5)));
  }
  RunRequest spiked;
  spiked.c2 = {1000.0};
  spiked.b = {2.5};
  spiked.tolerance = 1e-5;
  const auto s = run_verify(spiked);
  CHECK_FALSE(s[0].analytic);
  CHECK(s[0].within_tolerance);
}

TEST_CASE("analytic energies") {
  Job j;
  j.c2 = 1000;
  j.b = 2;
  j.state = {0, 0, 3};
  CHECK(std::abs(*analytic_energy(j, Convention::HallSaad) - 65.253459) < 5e-6);
  j.state = {0, 0, 2};
  CHECK(std::abs(*analytic_energy(j, Convention::HallSaad) - 65.245553) < 5e-6);
  j.b = 2.5;
  CHECK_FALSE(analytic_energy(j, Convention::HallSaad));
}

TEST_CASE("wavefunction report") {
  WavefunctionRequest w;
  w.run.c2 = {1000.0};
  w.run.b = {1.5};
  w.run.k = {2};
  w.run.D = {2};
  const auto rep = run_wavefunction(w);
  CHECK(rep.node_count == 2);
  CHECK(rep.norm == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.warning.empty());
  CHECK(rep.q.size() == 401);

  w.run.k = {0, 1};
  CHECK_THROWS_AS(run_wavefunction(w), DomainError);
}

TEST_CASE("reference fixture") {
  const auto& all = reference_values();
  CHECK(all.size() == 236);
  const auto v = reference_value(3, "D=3,b=2", "l=0");
  REQUIRE(v);
  CHECK(v->value == 65.253459);
  CHECK(v->decimals == 6);
  CHECK(v->rounding() == doctest::Approx(5e-7));
  CHECK_FALSE(reference_value(9, "x", "y"));

  const auto parsed = parse_reference_tables("# comment\n1 a b 1.25\n\n2 c d 3 # trailing\n");
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[1].decimals == 0);
  CHECK_THROWS_AS(parse_reference_tables("1 a b\n"), DomainError);
  CHECK_THROWS_AS(parse_reference_tables("1 a b x\n"), DomainError);
}

TEST_CASE("csv and json output") {
  CHECK(csv_number(44.95548478805703) == "44.9554848");
  CHECK(csv_number(std::nan("")) == "nan");

  RunRequest r;
  r.c2 = {10.0};
  r.b = {1.9};
  r.D = {2, 3};
  const auto recs = run_energy(r);
  std::ostringstream csv, js;
  write_energy(csv, recs, Format::Csv, r.convention);
  write_energy(js, recs, Format::Json, r.convention);

  std::istringstream lines(csv.str());
  std::string line;
  int rows = 0;
  while (std::getline(lines, line))
    if (!line.empty() && line[0] != '#') ++rows;
  CHECK(rows == 3);

  const auto parsed = nlohmann::json::parse(js.str());
  REQUIRE(parsed.size() == 2);
  for (const char* key : {"k", "l", "D", "l_D", "q_o", "w", "beta", "lbar", "leading", "plain", "E22", "E33", "E44"})
    CHECK(parsed[0].contains(key));
  CHECK(parsed[0]["D"] == 2);
}

TEST_CASE("table 2 reproduction") {
  const auto rep = run_table(2);
  CHECK(rep.pass());
  CHECK(rep.cells.size() == 36);
  CHECK(std::abs(rep.computed("D=10", "E44") - 12.354183) < 5e-7);
  CHECK_THROWS_AS(run_table(6), DomainError);
}

TEST_CASE("table 5 degeneracy identities") {
  const auto rep = run_table(5);
  CHECK(rep.checks.size() == 7);
  for (const auto& c : rep.checks) CHECK(c.pass);
  CHECK(std::abs(rep.computed("D=4", "E21_44") - 17.381708) < 5e-7);
  CHECK(rep.computed("D=4", "E21_44") == rep.computed("D=2", "E22_44"));
}
