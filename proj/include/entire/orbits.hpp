#pragma once

// Finite-budget orbit iteration, the bounded/unbounded heuristic built on it,
// and Newton location of fixed points with multiplier classification.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "entire/domain.hpp"
#include "entire/errors.hpp"
#include "entire/funcspec.hpp"

namespace entire {

struct OrbitPolicy {
  std::size_t budget = 200;
  double escape_radius = 1e6;
  double cycle_tol = 1e-9;
  std::size_t cycle_window = 32;

  void validate() const {
    if (budget < 1) throw InvalidArgument("orbit budget must be at least 1");
    if (!(escape_radius > 0.0)) throw InvalidArgument("escape radius must be positive");
    if (!(cycle_tol > 0.0)) throw InvalidArgument("cycle tolerance must be positive");
  }
};

enum class OrbitOutcome { Escaped, CycleLocked, BudgetExhausted };

inline const char* to_string(OrbitOutcome o) {
  switch (o) {
    case OrbitOutcome::Escaped: return "ESCAPED";
    case OrbitOutcome::CycleLocked: return "CYCLE_LOCKED";
    case OrbitOutcome::BudgetExhausted: return "BUDGET_EXHAUSTED";
  }
  return "?";
}

struct OrbitVerdict {
  OrbitOutcome kind = OrbitOutcome::BudgetExhausted;
  std::size_t step = 0;         // Escaped: step at which |f^n(z0)| >= escape radius
  double modulus = 0.0;         // Escaped: modulus there; BudgetExhausted: largest modulus seen
  std::size_t period = 0;       // CycleLocked
  cplx representative{};        // CycleLocked
  std::vector<cplx> trace;      // z0, f(z0), ... when requested
};

// Iterate until escape, a confirmed near-return, or the budget runs out.
// A near-return within cycle_tol to one of the last cycle_window points is
// only accepted after replaying one full period from the current point.
inline OrbitVerdict iterate_orbit(const FunctionExpression& f, cplx z0, const OrbitPolicy& policy,
                                  bool keep_trace = false) {
  policy.validate();
  OrbitVerdict v;
  std::vector<cplx> window;
  window.reserve(policy.cycle_window);
  std::size_t head = 0;  // ring buffer of recent points, oldest at `head` once full
  cplx z = z0;
  double max_mod = std::abs(z0);
  if (keep_trace) v.trace.push_back(z);
  if (!(max_mod < policy.escape_radius)) {
    v.kind = OrbitOutcome::Escaped;
    v.step = 0;
    v.modulus = std::isfinite(max_mod) ? max_mod : std::numeric_limits<double>::max();
    return v;
  }
  auto remember = [&](cplx p) {
    if (policy.cycle_window == 0) return;
    if (window.size() < policy.cycle_window) {
      window.push_back(p);
    } else {
      window[head] = p;
      head = (head + 1) % policy.cycle_window;
    }
  };
  remember(z);
  for (std::size_t n = 1; n <= policy.budget; ++n) {
    const Evaluation e = f.evaluate(z);
    z = e.value;
    const double mod = std::abs(z);
    if (keep_trace) v.trace.push_back(z);
    if (e.overflowed || !(mod < policy.escape_radius)) {
      v.kind = OrbitOutcome::Escaped;
      v.step = n;
      v.modulus = e.overflowed || !std::isfinite(mod) ? std::numeric_limits<double>::max() : mod;
      return v;
    }
    max_mod = std::max(max_mod, mod);
    // Look back p = 1, 2, ... steps for the shortest near-return.
    const std::size_t stored = window.size();
    for (std::size_t p = 1; p <= stored; ++p) {
      const std::size_t slot = (head + stored - p) % stored;
      if (std::abs(z - window[slot]) >= policy.cycle_tol) continue;
      cplx w = z;
      bool escaped = false;
      for (std::size_t k = 0; k < p; ++k) {
        const Evaluation r = f.evaluate(w);
        escaped = escaped || r.overflowed;
        w = r.value;
      }
      if (!escaped && std::abs(w - z) < policy.cycle_tol) {
        v.kind = OrbitOutcome::CycleLocked;
        v.step = n;
        v.period = p;
        v.representative = z;
        v.modulus = max_mod;
        return v;
      }
    }
    remember(z);
  }
  v.kind = OrbitOutcome::BudgetExhausted;
  v.step = policy.budget;
  v.modulus = max_mod;
  return v;
}

enum class PointClass : unsigned char { UnboundedSuspect = 0, BoundedSuspect = 1, Undecided = 2 };

inline const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::UnboundedSuspect: return "UNBOUNDED_SUSPECT";
    case PointClass::BoundedSuspect: return "BOUNDED_SUSPECT";
    case PointClass::Undecided: return "UNDECIDED";
  }
  return "?";
}

// Heuristic: escape means unbounded, a locked cycle or an orbit that stayed
// two orders of magnitude inside the escape radius means bounded.
inline PointClass classify_verdict(const OrbitVerdict& v, const OrbitPolicy& policy) {
  switch (v.kind) {
    case OrbitOutcome::Escaped: return PointClass::UnboundedSuspect;
    case OrbitOutcome::CycleLocked: return PointClass::BoundedSuspect;
    case OrbitOutcome::BudgetExhausted:
      return v.modulus < policy.escape_radius / 100.0 ? PointClass::BoundedSuspect : PointClass::Undecided;
  }
  return PointClass::Undecided;
}

inline PointClass classify_point(const FunctionExpression& f, cplx z0, const OrbitPolicy& policy) {
  return classify_verdict(iterate_orbit(f, z0, policy, false), policy);
}

enum class FixedPointClass { Superattracting, Attracting, Indifferent, Repelling };

inline const char* to_string(FixedPointClass c) {
  switch (c) {
    case FixedPointClass::Superattracting: return "superattracting";
    case FixedPointClass::Attracting: return "attracting";
    case FixedPointClass::Indifferent: return "indifferent";
    case FixedPointClass::Repelling: return "repelling";
  }
  return "?";
}

inline FixedPointClass classify_multiplier(cplx multiplier) {
  const double m = std::abs(multiplier);
  if (m <= 1e-8) return FixedPointClass::Superattracting;
  if (std::abs(m - 1.0) <= 1e-8) return FixedPointClass::Indifferent;
  return m < 1.0 ? FixedPointClass::Attracting : FixedPointClass::Repelling;
}

struct FixedPointRecord {
  cplx location;
  cplx multiplier;
  FixedPointClass kind;
  double residual;  // |f(z) - z|
};

struct FixedPointOptions {
  int seeds_per_axis = 32;
  double newton_tol = 1e-12;
  int max_newton = 100;
  double dedup_radius = 1e-6;
};

// Newton's method on g(z) = f(z) - z from a lattice of seeds over the region's
// bounding box. Non-converging seeds are dropped silently.
inline std::vector<FixedPointRecord> find_fixed_points(const FunctionExpression& f, const DomainSpec& region,
                                                       const FixedPointOptions& opts = {}) {
  if (opts.seeds_per_axis < 1) throw InvalidArgument("seeds_per_axis must be at least 1");
  const FunctionExpression df = f.derivative();
  const Rect box = region.bounding_box();
  const double inside_tol = 1e-9 * std::max(1.0, region.diameter());
  std::vector<FixedPointRecord> found;
  for (int j = 0; j < opts.seeds_per_axis; ++j)
    for (int i = 0; i < opts.seeds_per_axis; ++i) {
      cplx z(box.x_min + (i + 0.5) * box.width() / opts.seeds_per_axis,
             box.y_min + (j + 0.5) * box.height() / opts.seeds_per_axis);
      bool ok = true;
      for (int it = 0; it < opts.max_newton; ++it) {
        const Evaluation fz = f.evaluate(z);
        const Evaluation dz = df.evaluate(z);
        if (fz.overflowed || dz.overflowed) {
          ok = false;
          break;
        }
        const cplx g = fz.value - z;
        if (g == cplx(0.0, 0.0)) break;
        const cplx dg = dz.value - 1.0;
        if (dg == cplx(0.0, 0.0)) break;
        const cplx step = g / dg;
        z -= step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
          ok = false;
          break;
        }
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
      }
      if (!ok) continue;
      const Evaluation fz = f.evaluate(z);
      const double residual = std::abs(fz.value - z);
      if (fz.overflowed || !(residual < opts.newton_tol)) continue;
      if (!(region.signed_distance(z) <= inside_tol)) continue;
      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const FixedPointRecord& r) {
        return std::abs(r.location - z) < opts.dedup_radius;
      });
      if (duplicate) continue;
      const cplx mult = df(z);
      found.push_back({z, mult, classify_multiplier(mult), residual});
    }
  std::sort(found.begin(), found.end(), [](const FixedPointRecord& a, const FixedPointRecord& b) {
    if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
  return found;
}

}  // namespace entire
