#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lnorm/analytic.hpp"
#include "lnorm/critical.hpp"

using namespace lnorm;

TEST_CASE("upper_bound_of_record") {
  CHECK(*upper_bound_of_record(2.0, 0.5) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(*upper_bound_of_record(3.0, 1.0) == doctest::Approx(4.5).epsilon(1e-15));
  CHECK_FALSE(upper_bound_of_record(3.0, 0.5).has_value());
  CHECK(*upper_bound_of_record(2.0, 0.3) == doctest::Approx(f_of_s(0.3)).epsilon(1e-14));
  CHECK_THROWS_AS((void)upper_bound_of_record(2.0, 0.0), std::invalid_argument);
}

TEST_CASE("grids") {
  const auto g = make_grid(0.5, 1.5, 0.1);
  REQUIRE(g.size() == 11);
  CHECK(g[3] == 0.8);
  CHECK(g.back() == 1.5);
  CHECK(make_grid(1.0, 0.5, 0.1).empty());
  CHECK_THROWS_AS((void)make_grid(0.0, 1.0, 0.0), std::invalid_argument);

  const auto d = default_grid_p2();
  CHECK(d.size() == 33);
  CHECK(std::is_sorted(d.begin(), d.end()));
  CHECK(std::find(d.begin(), d.end(), s_star()) != d.end());
  CHECK(std::find(d.begin(), d.end(), s_upper()) != d.end());

  const auto sizes = scan_sizes(1 << 16);
  CHECK(sizes == std::vector<std::size_t>{256, 1024, 4096, 16384, 65536});
}

TEST_CASE("scan_critical verdicts at p = 2") {
  ScanOptions opts;
  opts.M_max = 1 << 14;
  opts.threads = 4;
  const std::vector<double> grid{0.30, 0.35, 0.40};
  const auto scan = scan_critical(2.0, grid, opts);
  CHECK(scan.target == 4.0);
  REQUIRE(scan.per_s.size() == 3);
  CHECK(scan.per_s[0].verdict == Verdict::certified_above);
  CHECK(scan.per_s[0].witness_ratio.value_or(0.0) > 4.0);
  CHECK(scan.per_s[1].verdict == Verdict::inconclusive);
  CHECK(scan.per_s[2].verdict == Verdict::below_evidence);
  CHECK(scan.verdicts_monotone);
  REQUIRE(scan.bracket_low);
  REQUIRE(scan.bracket_high);
  CHECK(*scan.bracket_low <= s_star());
  CHECK(*scan.bracket_high >= s_upper());
}

TEST_CASE("scan_critical at p = 3 marks s >= 1 as below evidence") {
  ScanOptions opts;
  opts.M_max = 1 << 12;
  opts.threads = 4;
  const auto grid = make_grid(0.5, 1.5, 0.1);
  const auto scan = scan_critical(3.0, grid, opts);
  CHECK(scan.target == doctest::Approx(4.5));
  for (const auto& pt : scan.per_s) {
    if (pt.s >= 1.0) {
      CHECK(pt.verdict == Verdict::below_evidence);
    } else {
      CHECK(pt.verdict != Verdict::below_evidence);
    }
  }
}

TEST_CASE("scan_critical rejects bad grids") {
  const std::vector<double> empty;
  CHECK_THROWS_AS((void)scan_critical(2.0, empty), std::invalid_argument);
  const std::vector<double> unsorted{0.4, 0.3};
  CHECK_THROWS_AS((void)scan_critical(2.0, unsorted), std::invalid_argument);
}

TEST_CASE("verdict names") {
  CHECK(to_string(Verdict::certified_above) == "CERTIFIED_ABOVE");
  CHECK(to_string(Verdict::below_evidence) == "BELOW_EVIDENCE");
  CHECK(to_string(Verdict::inconclusive) == "INCONCLUSIVE");
}
