#pragma once

// Minimum and maximum modulus of f on circles |z| = r, the iterated minimum
// modulus r -> m(r) -> m(m(r)) -> ..., and the disc sequence built from it.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "entire/domain.hpp"
#include "entire/errors.hpp"
#include "entire/funcspec.hpp"

namespace entire {

struct RadialExtremum {
  double radius = 0.0;
  double value = 0.0;
  double arg_extremum = 0.0;  // in [0, 2 pi)
  std::size_t samples_used = 0;
  bool refined = false;
};

struct ModulusOptions {
  std::size_t n_coarse = 4096;
  double tol = 1e-10;  // angular bracket width that ends refinement
};

namespace detail {

inline double modulus_on_circle(const FunctionExpression& f, double r, double theta) {
  const Evaluation e = f.evaluate(cplx(r * std::cos(theta), r * std::sin(theta)));
  return e.overflowed ? std::numeric_limits<double>::infinity() : std::abs(e.value);
}

// Coarse uniform scan, then ternary search inside the bracket around every
// coarse local extremum. `sign` = +1 for the minimum, -1 for the maximum.
inline RadialExtremum circle_extremum(const FunctionExpression& f, double r, const ModulusOptions& opts, double sign) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidRadius(r);
  if (opts.n_coarse < 64) throw InvalidArgument("n_coarse must be at least 64");
  if (!(opts.tol > 0.0)) throw InvalidArgument("tol must be positive");
  const std::size_t n = opts.n_coarse;
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = sign * modulus_on_circle(f, r, step * static_cast<double>(k));

  RadialExtremum best;
  best.radius = r;
  best.samples_used = n;
  double best_key = std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  auto consider = [&](double key, double theta) {
    if (key < best_key) {
      best_key = key;
      best_theta = theta;
    }
  };
  for (std::size_t k = 0; k < n; ++k) consider(v[k], step * static_cast<double>(k));

  for (std::size_t k = 0; k < n; ++k) {
    const double prev = v[(k + n - 1) % n], next = v[(k + 1) % n];
    if (!(v[k] <= prev && v[k] <= next)) continue;
    double lo = step * (static_cast<double>(k) - 1.0), hi = step * (static_cast<double>(k) + 1.0);
    while (hi - lo > opts.tol) {
      const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      const double f1 = sign * modulus_on_circle(f, r, m1), f2 = sign * modulus_on_circle(f, r, m2);
      best.samples_used += 2;
      consider(f1, m1);
      consider(f2, m2);
      if (f1 < f2) {
        hi = m2;
      } else {
        lo = m1;
      }
    }
    const double mid = 0.5 * (lo + hi);
    consider(sign * modulus_on_circle(f, r, mid), mid);
    best.samples_used += 1;
    best.refined = true;
  }
  double arg = std::fmod(best_theta, 2.0 * std::numbers::pi);
  if (arg < 0.0) arg += 2.0 * std::numbers::pi;
  best.arg_extremum = arg;
  best.value = sign * best_key;
  if (!std::isfinite(best.value)) best.value = std::numeric_limits<double>::max();
  return best;
}

}  // namespace detail

// m(r) = min |f(z)| over |z| = r.
inline RadialExtremum min_modulus(const FunctionExpression& f, double r, const ModulusOptions& opts = {}) {
  return detail::circle_extremum(f, r, opts, 1.0);
}

// M(r) = max |f(z)| over |z| = r. Overflow saturates to the largest double.
inline RadialExtremum max_modulus(const FunctionExpression& f, double r, const ModulusOptions& opts = {}) {
  return detail::circle_extremum(f, r, opts, -1.0);
}

enum class MinModVerdict { Diverges, NotDiverging, Undecided };

inline const char* to_string(MinModVerdict v) {
  switch (v) {
    case MinModVerdict::Diverges: return "DIVERGES";
    case MinModVerdict::NotDiverging: return "NOT_DIVERGING";
    case MinModVerdict::Undecided: return "UNDECIDED";
  }
  return "?";
}

struct MinModWitness {
  std::size_t index = 0;                     // index in `sequence` that decided the verdict
  std::optional<std::size_t> earlier_index;  // revisited value, if any
  std::string reason;
};

struct MinModIterationReport {
  double r0 = 0.0;
  std::vector<double> sequence;  // sequence[0] = r0, sequence[k] = m^k(r0)
  MinModVerdict verdict = MinModVerdict::Undecided;
  MinModWitness witness;
  // Finite-budget evidence only: crossing blow_up is read as divergence.
  std::string note = "heuristic verdict from finitely many iterates; DIVERGES means the blow-up threshold was crossed";
};

struct MinModIterationOptions {
  std::size_t n_max = 50;
  double blow_up = 1e50;
  double revisit_rel_tol = 1e-9;
  double floor = 1e-12;
  ModulusOptions modulus;
};

inline MinModIterationReport iterate_min_modulus(const FunctionExpression& f, double r0,
                                                 const MinModIterationOptions& opts = {}) {
  if (!(r0 > 0.0) || !std::isfinite(r0)) throw InvalidRadius(r0);
  if (opts.n_max < 1) throw InvalidArgument("n_max must be at least 1");
  if (!(opts.blow_up > r0)) throw InvalidArgument("blow_up must exceed r0");
  MinModIterationReport rep;
  rep.r0 = r0;
  rep.sequence.push_back(r0);
  for (std::size_t step = 1; step <= opts.n_max; ++step) {
    const double m = min_modulus(f, rep.sequence.back(), opts.modulus).value;
    rep.sequence.push_back(m);
    const std::size_t idx = rep.sequence.size() - 1;
    if (m > opts.blow_up) {
      rep.verdict = MinModVerdict::Diverges;
      rep.witness = {idx, std::nullopt, "value exceeded the blow-up threshold"};
      return rep;
    }
    if (m < opts.floor) {
      rep.verdict = MinModVerdict::NotDiverging;
      rep.witness = {idx, std::nullopt, "value fell below the floor"};
      return rep;
    }
    for (std::size_t j = 0; j < idx; ++j) {
      const double prev = rep.sequence[j];
      if (std::abs(m - prev) <= opts.revisit_rel_tol * std::max(m, prev)) {
        rep.verdict = MinModVerdict::NotDiverging;
        rep.witness = {idx, j, "value revisited an earlier iterate"};
        return rep;
      }
    }
  }
  // A sequence that decreased at every step stayed below r0 for the whole
  // budget; treat that as evidence against divergence.
  bool decreasing = rep.sequence.size() > 2;
  for (std::size_t k = 1; decreasing && k < rep.sequence.size(); ++k)
    decreasing = rep.sequence[k] < rep.sequence[k - 1];
  if (decreasing) {
    rep.verdict = MinModVerdict::NotDiverging;
    rep.witness = {rep.sequence.size() - 1, 0, "sequence decreased at every step of the budget"};
    return rep;
  }
  rep.verdict = MinModVerdict::Undecided;
  rep.witness = {rep.sequence.size() - 1, std::nullopt, "iteration budget exhausted"};
  return rep;
}

struct DiscSequence {
  std::vector<DomainSpec> discs;  // centred at 0, radii m^n(r0)
  MinModIterationReport report;
};

// Discs |z| < m^n(r0) for n = 0..count-1. Stops early if an iterate
// falls below the floor (no positive radius left).
inline DiscSequence derive_disc_sequence(const FunctionExpression& f, double r0, std::size_t count,
                                         const ModulusOptions& modulus = {}) {
  if (count < 1) throw InvalidArgument("count must be at least 1");
  if (!(r0 > 0.0) || !std::isfinite(r0)) throw InvalidRadius(r0);
  DiscSequence seq;
  seq.report.r0 = r0;
  seq.report.sequence.push_back(r0);
  seq.discs.push_back(DomainSpec::disc(0.0, r0, "D'_0"));
  constexpr double kFloor = 1e-12;
  while (seq.discs.size() < count) {
    const double m = min_modulus(f, seq.report.sequence.back(), modulus).value;
    seq.report.sequence.push_back(m);
    if (!(m >= kFloor) || m >= std::numeric_limits<double>::max()) {
      seq.report.verdict = m < kFloor ? MinModVerdict::NotDiverging : MinModVerdict::Diverges;
      seq.report.witness = {seq.report.sequence.size() - 1, std::nullopt, "sequence left the representable range"};
      return seq;
    }
    seq.discs.push_back(DomainSpec::disc(0.0, m, "D'_" + std::to_string(seq.discs.size())));
  }
  seq.report.verdict = MinModVerdict::Undecided;
  seq.report.witness = {seq.report.sequence.size() - 1, std::nullopt, "requested count reached"};
  return seq;
}

}  // namespace entire
