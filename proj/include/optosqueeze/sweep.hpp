#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "optosqueeze/spectrum.hpp"

namespace optosqueeze {

enum class SweepAxis { detuning0, squeeze_r, temperature, power };
enum class VarianceKind { varQ, varP };

struct SweepSpec {
  SweepAxis axis = SweepAxis::detuning0;
  std::vector<double> grid;  // strictly increasing, length >= 2
  SystemParams fixed;
  BranchPolicy branch_policy = BranchPolicy::lowest_qs_stable;
  std::optional<CothModel> coth;  // unset: per-point temperature default
  double tol = 1e-7;
  int workers = 1;
};

/// One grid point. Rows without a stable branch carry no variance values.
struct SweepRecord {
  double coordinate = 0.0;
  bool stable = false;
  std::optional<double> branch_Qs;
  std::optional<double> varQ;
  std::optional<double> varP;
  int branch_index = -1;
};

struct MinSearchResult {
  double coordinate = 0.0;
  double value = 0.0;
};

inline SystemParams with_axis_value(SystemParams p, SweepAxis axis, double x) {
  switch (axis) {
    case SweepAxis::detuning0: p.detuning_Delta0 = x; break;
    case SweepAxis::squeeze_r: p.squeeze_r = x; break;
    case SweepAxis::temperature: p.temperature_T = x; break;
    case SweepAxis::power: p.laser_power_P = x; break;
  }
  return p;
}

namespace detail {

inline void validate_spec(const SweepSpec& spec) {
  if (spec.grid.size() < 2) {
    throw ValidationError("grid", "must hold at least 2 points");
  }
  for (std::size_t k = 0; k + 1 < spec.grid.size(); ++k) {
    if (!(spec.grid[k] < spec.grid[k + 1])) {
      throw ValidationError("grid", "must be strictly increasing");
    }
  }
  validate(with_axis_value(spec.fixed, spec.axis, spec.grid.front()));
}

inline SweepRecord evaluate_point(const SweepSpec& spec, double x) {
  SweepRecord rec;
  rec.coordinate = x;
  const SystemParams p = with_axis_value(spec.fixed, spec.axis, x);
  const DerivedParams d = derive_params(p);
  const std::vector<SteadyBranch> branches =
      solve_steady_state(d, p.detuning_Delta0);
  const SteadyBranch* chosen = nullptr;
  try {
    chosen = &select_branch(branches, spec.branch_policy);
  } catch (const NoStableBranchError&) {
    return rec;  // flagged row, no values
  }
  rec.stable = true;
  rec.branch_Qs = chosen->Qs;
  rec.branch_index = chosen->index;
  const CothModel coth =
      spec.coth.value_or(CothModel::for_temperature(p.temperature_T));
  const VarianceResult v = variance_QP(d, *chosen, coth, spec.tol);
  rec.varQ = v.varQ;
  rec.varP = v.varP;
  return rec;
}

}  // namespace detail

/// Evaluates every grid point; output order equals grid order regardless of
/// worker count, and per-point results do not depend on how work was split.
inline std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
  detail::validate_spec(spec);
  const std::size_t n = spec.grid.size();
  std::vector<SweepRecord> records(n);
  const int workers =
      std::max(1, std::min<int>(spec.workers, static_cast<int>(n)));

  if (workers == 1) {
    for (std::size_t k = 0; k < n; ++k) {
      records[k] = detail::evaluate_point(spec, spec.grid[k]);
    }
    return records;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t k = next.fetch_add(1);
        if (k >= n) return;
        try {
          records[k] = detail::evaluate_point(spec, spec.grid[k]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return records;
}

/// Golden-section search for the minimum of f on [a, b]; assumes local
/// unimodality. Stops when the bracket is narrower than rel_tol relative to
/// the coordinate magnitude. Returns the best probed point.
inline MinSearchResult golden_section_minimize(
    const std::function<double(double)>& f, double a, double b,
    double rel_tol) {
  if (!(a < b)) throw std::invalid_argument("golden_section: need a < b");
  constexpr double invphi = 0.6180339887498949;
  const double tol_x = rel_tol * std::max({std::abs(a), std::abs(b), 1e-300});
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  MinSearchResult best = fc <= fd ? MinSearchResult{c, fc}
                                  : MinSearchResult{d, fd};
  while (b - a > tol_x) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
      if (fc < best.value) best = {c, fc};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
      if (fd < best.value) best = {d, fd};
    }
  }
  return best;
}

/// Coarse grid scan followed by golden-section refinement inside the
/// bracketing grid cell (coordinate tolerance 1e-4 relative). Unstable
/// points probed during refinement count as +infinity.
inline MinSearchResult find_min_variance(const SweepSpec& spec,
                                         VarianceKind which) {
  const std::vector<SweepRecord> records = run_sweep(spec);
  const auto value_of = [&](const SweepRecord& r) -> std::optional<double> {
    return which == VarianceKind::varP ? r.varP : r.varQ;
  };
  std::size_t best = records.size();
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto v = value_of(records[k]);
    if (!v) continue;
    if (best == records.size() || *v < *value_of(records[best])) best = k;
  }
  if (best == records.size()) {
    throw NoStableBranchError("find_min_variance: no stable grid point");
  }

  const double lo = spec.grid[best > 0 ? best - 1 : 0];
  const double hi = spec.grid[std::min(best + 1, spec.grid.size() - 1)];
  const auto probe = [&](double x) {
    const SweepRecord r = detail::evaluate_point(spec, x);
    const auto v = value_of(r);
    return v ? *v : std::numeric_limits<double>::infinity();
  };
  MinSearchResult refined = golden_section_minimize(probe, lo, hi, 1e-4);
  const double grid_best = *value_of(records[best]);
  if (grid_best < refined.value) {
    refined = {spec.grid[best], grid_best};
  }
  return refined;
}

}  // namespace optosqueeze
