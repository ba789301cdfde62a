#include "lnorm/critical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lnorm/analytic.hpp"
#include "lnorm/errors.hpp"
#include "lnorm/normest.hpp"
#include "lnorm/witness.hpp"
#include "parallel.hpp"

namespace lnorm {

namespace {

// The delta bound at s = 1/(2 sqrt 2) equals 4 only up to rounding.
constexpr double kBoundMatchTol = 1e-12;

CriticalPoint classify(double p, double target, double s, const ScanOptions& opts) {
  CriticalPoint pt;
  pt.s = s;
  pt.upper_bound = upper_bound_of_record(p, s);

  if (p == 2.0 && s > 0.25 && s < s_star()) {
    try {
      const AsWitness w = build_as_witness(s, opts.witness_M);
      const AsCertificate cert = certify_as_witness(w);
      pt.witness_eps = w.params.eps();
      pt.witness_ratio = cert.ratio;
      if (cert.pointwise_ok && cert.ratio > target) {
        pt.verdict = Verdict::certified_above;
        pt.certificate = "gamma_witness";
      }
    } catch (const NoValidEpsilon&) {
      // Falls through to the sweep.
    }
  }

  const StructuredMatrix A{Shape::L, GeneratorSequence::as(s)};
  const auto sizes = scan_sizes(opts.M_max);
  SweepOptions so;
  so.tol = opts.tol;
  so.max_iter = opts.max_iter;
  const auto sweep = truncation_sweep(A, p, sizes, so);
  for (const auto& e : sweep) {
    if (e.value >= pt.sweep_max) {
      pt.sweep_max = e.value;
      pt.sweep_max_truncation = e.truncation;
    }
  }

  if (pt.verdict == Verdict::certified_above) return pt;

  // The final power iterate is itself a witness vector.
  double best_certificate = 0.0;
  for (const auto& e : sweep) best_certificate = std::max(best_certificate, e.lower_certificate);
  if (best_certificate > target) {
    pt.verdict = Verdict::certified_above;
    pt.certificate = "power_iterate";
    return pt;
  }

  const bool bound_is_target = pt.upper_bound && std::fabs(*pt.upper_bound - target) <= kBoundMatchTol * target;
  if (bound_is_target && pt.sweep_max < target - opts.margin) {
    pt.verdict = Verdict::below_evidence;
    pt.certificate = "sweep_and_bound";
  }
  return pt;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::certified_above:
      return "CERTIFIED_ABOVE";
    case Verdict::below_evidence:
      return "BELOW_EVIDENCE";
    case Verdict::inconclusive:
      return "INCONCLUSIVE";
  }
  return "?";
}

std::optional<double> upper_bound_of_record(double p, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("upper_bound_of_record: s must be > 0");
  if (p == 2.0) return delta_upper_bound(DeltaBoundParams::standard(s, 1000), GeneratorSequence::as(s)).value;
  if (s >= 1.0) return pq_constant(p);
  return std::nullopt;
}

std::vector<std::size_t> scan_sizes(std::size_t M_max) {
  if (M_max < 1) throw std::invalid_argument("scan_sizes: M_max must be >= 1");
  std::vector<std::size_t> sizes;
  for (std::size_t M = 256; M < M_max; M *= 4) sizes.push_back(M);
  sizes.push_back(M_max);
  return sizes;
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("make_grid: step must be positive and bounds finite");
  }
  std::vector<double> grid;
  if (hi < lo) return grid;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) {
    grid.push_back(std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12);
  }
  return grid;
}

std::vector<double> default_grid_p2() {
  auto grid = make_grid(0.25, 0.40, 0.005);
  grid.push_back(s_star());
  grid.push_back(s_upper());
  std::sort(grid.begin(), grid.end());
  return grid;
}

CriticalScan scan_critical(double p, std::span<const double> s_grid, const ScanOptions& opts) {
  if (s_grid.empty()) throw std::invalid_argument("scan_critical: empty grid");
  if (!std::is_sorted(s_grid.begin(), s_grid.end())) throw std::invalid_argument("scan_critical: grid must be sorted");
  if (s_grid.front() <= 0.0) throw std::invalid_argument("scan_critical: grid values must be positive");

  CriticalScan scan;
  scan.p = p;
  scan.target = pq_constant(p);
  scan.grid.assign(s_grid.begin(), s_grid.end());
  scan.per_s.resize(s_grid.size());
  detail::parallel_for(s_grid.size(), opts.threads,
                       [&](std::size_t i) { scan.per_s[i] = classify(p, scan.target, s_grid[i], opts); });

  std::optional<double> lowest_below;
  std::optional<double> highest_above;
  for (const auto& pt : scan.per_s) {
    if (pt.verdict == Verdict::below_evidence && !lowest_below) lowest_below = pt.s;
    if (pt.verdict == Verdict::certified_above) highest_above = pt.s;
  }
  if (lowest_below && highest_above && *highest_above > *lowest_below) {
    scan.verdicts_monotone = false;
    for (auto& pt : scan.per_s) {
      const bool bad_above = pt.verdict == Verdict::certified_above && pt.s > *lowest_below;
      const bool bad_below = pt.verdict == Verdict::below_evidence && pt.s < *highest_above;
      if (bad_above || bad_below) pt.verdict = Verdict::inconclusive;
    }
  }

  for (const auto& pt : scan.per_s) {
    if (pt.verdict == Verdict::certified_above) scan.bracket_low = pt.s;
    if (pt.verdict == Verdict::below_evidence && !scan.bracket_high) scan.bracket_high = pt.s;
  }
  return scan;
}

}  // namespace lnorm
