#include "lhzmf/phasediag.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "lhzmf/numeric.hpp"
#include "lhzmf/parallel.hpp"

namespace lhz {

namespace {

struct Probe {
  double tau;
  double m;    // global minimum
  double key;  // |m|, nondecreasing in tau
};

class TauScanner {
public:
  TauScanner(double s, const Temperature& beta, const CouplingModel& couplings, const TauSearch& search)
      : s_(s), beta_(beta), couplings_(couplings), search_(search) {}

  MinimaReport report(double tau) const {
    return find_stationary_points(ControlPoint(s_, tau), beta_, couplings_, search_.stationary);
  }

  Probe probe(double tau) const {
    const double m = report(tau).global_minimum().m;
    return {tau, m, std::abs(m)};
  }

  // Narrows [a, b] onto a discontinuity of the key, or gives up.
  std::optional<std::pair<Probe, Probe>> refine(const Probe& a, const Probe& b, std::size_t& budget) const {
    if (b.key - a.key < search_.jump_threshold) return std::nullopt;
    if (b.tau - a.tau <= search_.tau_resolution) return std::pair{a, b};
    if (budget == 0) return std::nullopt;
    --budget;
    const Probe mid = probe(0.5 * (a.tau + b.tau));
    if (mid.tau <= a.tau || mid.tau >= b.tau) return std::pair{a, b};
    std::array<std::pair<Probe, Probe>, 2> halves{std::pair{a, mid}, std::pair{mid, b}};
    if (halves[1].second.key - halves[1].first.key > halves[0].second.key - halves[0].first.key)
      std::swap(halves[0], halves[1]);
    for (const auto& [lo, hi] : halves)
      if (auto found = refine(lo, hi, budget)) return found;
    return std::nullopt;
  }

  std::optional<TransitionPoint> resolve(const Probe& a, const Probe& b) const;

private:
  double s_;
  Temperature beta_;
  CouplingModel couplings_;
  TauSearch search_;
};

const StationaryPoint* nearest_minimum(const std::vector<StationaryPoint>& minima, double m,
                                       const StationaryPoint* exclude = nullptr) {
  const StationaryPoint* best = nullptr;
  for (const auto& p : minima) {
    if (exclude != nullptr && p.m == exclude->m) continue;
    if (best == nullptr || std::abs(p.m - m) < std::abs(best->m - m)) best = &p;
  }
  return best;
}

// f(high basin) - f(low basin) at tau, with the basins tracked by nearest m.
struct BasinPair {
  double tau;
  double m_low_basin;
  double m_high_basin;
  double delta_f;
};

std::optional<BasinPair> basin_pair(const MinimaReport& report, double tau, double m_low, double m_high) {
  const auto minima = report.minima();
  const StationaryPoint* low = nearest_minimum(minima, m_low);
  const StationaryPoint* high = nearest_minimum(minima, m_high);
  if (low == nullptr || high == nullptr) return std::nullopt;
  if (low == high) {
    // one basin is gone; pick the other minimum nearest to the missing one
    if (std::abs(low->m - m_low) <= std::abs(low->m - m_high))
      high = nearest_minimum(minima, m_high, low);
    else
      low = nearest_minimum(minima, m_low, high);
    if (low == nullptr || high == nullptr) return std::nullopt;
  }
  return BasinPair{tau, low->m, high->m, high->f - low->f};
}

std::optional<TransitionPoint> TauScanner::resolve(const Probe& a, const Probe& b) const {
  // The key flips where the tie-break tolerance is crossed, so the bracket
  // sits next to, not on, delta_f = 0.  Newton steps on delta_f use the
  // envelope slope d(delta_f)/d(tau) = m_low^4 - m_high^4.
  std::optional<BasinPair> best;
  for (const auto& cand : {basin_pair(report(a.tau), a.tau, a.m, b.m), basin_pair(report(b.tau), b.tau, a.m, b.m)})
    if (cand && (!best || std::abs(cand->delta_f) < std::abs(best->delta_f))) best = cand;
  for (int it = 0; best && it < 4 && best->delta_f != 0.0; ++it) {
    const double ml2 = best->m_low_basin * best->m_low_basin;
    const double mh2 = best->m_high_basin * best->m_high_basin;
    const double slope = ml2 * ml2 - mh2 * mh2;
    if (slope == 0.0) break;
    const double tau = std::clamp(best->tau - best->delta_f / slope, search_.tau_lo, search_.tau_hi);
    auto next = basin_pair(report(tau), tau, best->m_low_basin, best->m_high_basin);
    if (!next || !(std::abs(next->delta_f) < std::abs(best->delta_f))) break;
    best = next;
  }
  if (!best || !(std::abs(best->delta_f) < kDegenerateMinimumTolerance)) return std::nullopt;
  const double lo = std::min(best->m_low_basin, best->m_high_basin);
  const double hi = std::max(best->m_low_basin, best->m_high_basin);
  if (hi - lo < search_.jump_threshold) return std::nullopt;
  return TransitionPoint{s_, best->tau, lo, hi, hi - lo};
}

}  // namespace

std::vector<double> SGrid::values() const {
  if (!(step > 0.0) || !(start >= 0.0) || !(stop <= 1.0) || !(start <= stop))
    throw DomainError("s grid must satisfy 0 <= start <= stop <= 1 and step > 0");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(std::clamp(start + static_cast<double>(i) * step, 0.0, 1.0));
  return out;
}

CriticalPoint critical_point_closed_form(double J) {
  if (!(J > 0.0) || !std::isfinite(J)) throw DomainError("J must be > 0");
  // f' = f'' = f''' = 0 at m_c = sqrt(2/5) for every J
  const double a = std::pow(2.0, 2.5);
  const double b = std::pow(3.0, 2.5);
  const double denom = b * J + a;
  return {a / denom, std::pow(5.0, 2.5) * J / (8.0 * denom), CriticalMethod::ClosedForm};
}

double tangent_exponent(double J) {
  const CriticalPoint cp = critical_point_closed_form(J);
  return std::log(cp.tau_c) / std::log(cp.s_c);
}

std::optional<TransitionPoint> find_tau_star(double s, const Temperature& beta,
                                             const CouplingModel& couplings, const TauSearch& search) {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("s must be in [0, 1]");
  if (!(search.tau_lo >= 0.0 && search.tau_hi <= 1.0 && search.tau_lo < search.tau_hi))
    throw DomainError("tau range must satisfy 0 <= lo < hi <= 1");
  if (search.coarse_points < 2) throw DomainError("tau scan needs at least 2 points");

  const TauScanner scanner(s, beta, couplings, search);
  const std::size_t n = search.coarse_points;
  std::vector<Probe> coarse;
  coarse.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = k + 1 == n ? search.tau_hi
                                : search.tau_lo + (search.tau_hi - search.tau_lo) * static_cast<double>(k) /
                                                      static_cast<double>(n - 1);
    coarse.push_back(scanner.probe(t));
  }

  std::optional<TransitionPoint> best;
  auto rise = [&](std::size_t k) { return coarse[k + 1].key - coarse[k].key; };
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double r = rise(k);
    if (r < search.jump_threshold) continue;
    if (k > 0 && rise(k - 1) > r) continue;
    if (k + 2 < n && rise(k + 1) > r) continue;
    std::size_t budget = search.refinement_budget;
    const auto bracket = scanner.refine(coarse[k], coarse[k + 1], budget);
    if (!bracket) continue;
    auto point = scanner.resolve(bracket->first, bracket->second);
    if (point && (!best || point->jump > best->jump)) best = point;
  }
  return best;
}

namespace {

bool is_uniform(const CouplingModel& c) {
  return c.kind() == CouplingKind::Uniform || c.epsilon() == 1.0;
}

struct EndFit {
  double s_c;
  double tau_c;
};

// Extrapolates jump^2 -> 0 beyond the outermost of five points.  `direction`
// is +1 for a right end, -1 for a left end.
std::optional<EndFit> extrapolate_end(const std::vector<TransitionPoint>& pts, double direction) {
  const TransitionPoint& end = pts.front();
  std::array<double, 5> t{}, jump_sq{}, tau{};
  for (std::size_t i = 0; i < 5; ++i) {
    t[i] = pts[i].s - end.s;
    jump_sq[i] = pts[i].jump * pts[i].jump;
    tau[i] = pts[i].tau_star;
  }
  if (!(pts.back().jump > end.jump)) return std::nullopt;  // not closing towards the end
  std::array<double, 3> cj{}, ct{};
  fit_polynomial(t, jump_sq, cj);
  fit_polynomial(t, tau, ct);

  // root of c0 + c1 t + c2 t^2 beyond the end, nearest to it
  const double c0 = cj[0], c1 = cj[1], c2 = cj[2];
  std::optional<double> root;
  auto consider = [&](double x) {
    if (direction * x >= 0.0 && (!root || std::abs(x) < std::abs(*root))) root = x;
  };
  if (c2 == 0.0) {
    if (c1 != 0.0) consider(-c0 / c1);
  } else {
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc >= 0.0) {
      const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
      if (q != 0.0) consider(c0 / q);
      consider(q / c2);
    }
  }
  if (!root) return std::nullopt;
  const double span = std::abs(pts.back().s - end.s);
  if (std::abs(*root) > span) return std::nullopt;
  const double x = *root;
  return EndFit{end.s + x, ct[0] + ct[1] * x + ct[2] * x * x};
}

}  // namespace

std::optional<CriticalPoint> numeric_critical_point(const TransitionLine& line) {
  const auto grid = line.grid.values();
  const double tol = 0.25 * line.grid.step;
  for (const Segment& seg : line.segments) {
    if (seg.end - seg.begin < 5) continue;
    const TransitionPoint& first = line.points[seg.begin];
    const TransitionPoint& last = line.points[seg.end - 1];
    const bool left_interior = first.s - grid.front() > tol;
    const bool right_interior = grid.back() - last.s > tol;
    if (left_interior) {
      std::vector<TransitionPoint> pts(line.points.begin() + seg.begin, line.points.begin() + seg.begin + 5);
      if (auto fit = extrapolate_end(pts, -1.0)) return CriticalPoint{fit->s_c, fit->tau_c, CriticalMethod::Numeric};
    }
    if (right_interior) {
      std::vector<TransitionPoint> pts;
      for (std::size_t i = 0; i < 5; ++i) pts.push_back(line.points[seg.end - 1 - i]);
      if (auto fit = extrapolate_end(pts, 1.0)) return CriticalPoint{fit->s_c, fit->tau_c, CriticalMethod::Numeric};
    }
  }
  return std::nullopt;
}

TransitionLine trace_line(const Temperature& beta, const CouplingModel& couplings, const SGrid& grid,
                          const TraceOptions& options) {
  const auto s_values = grid.values();
  std::vector<std::optional<TransitionPoint>> hits(s_values.size());
  parallel_for(s_values.size(), options.threads, [&](std::size_t i) {
    hits[i] = find_tau_star(s_values[i], beta, couplings, options.search);
  });

  TransitionLine line;
  line.grid = grid;
  bool previous_hit = false;
  for (const auto& hit : hits) {
    if (hit) {
      if (!previous_hit) line.segments.push_back({line.points.size(), line.points.size()});
      line.points.push_back(*hit);
      line.segments.back().end = line.points.size();
    }
    previous_hit = hit.has_value();
  }
  if (beta.is_zero() && is_uniform(couplings))
    line.critical_point = critical_point_closed_form(couplings.J());
  else
    line.critical_point = numeric_critical_point(line);
  return line;
}

std::vector<JumpSample> jump_profile(const TransitionLine& line) {
  std::vector<JumpSample> out;
  out.reserve(line.points.size());
  for (const auto& p : line.points) out.push_back({p.s, p.jump});
  return out;
}

namespace {

struct Vertex {
  double s;
  double tau;
  std::size_t segment;
  bool critical;
};

}  // namespace

ScheduleCrossing schedule_crossing(const ScheduleFamily& family, const TransitionLine& line) {
  std::vector<Vertex> vertices;
  for (std::size_t k = 0; k < line.segments.size(); ++k)
    for (std::size_t i = line.segments[k].begin; i < line.segments[k].end; ++i)
      vertices.push_back({line.points[i].s, line.points[i].tau_star, k, false});

  if (line.critical_point && !vertices.empty()) {
    const CriticalPoint& cp = *line.critical_point;
    const double reach = 3.0 * line.grid.step;
    std::optional<std::size_t> at;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < line.segments.size(); ++k) {
      const double s_first = line.points[line.segments[k].begin].s;
      const double s_last = line.points[line.segments[k].end - 1].s;
      if (cp.s_c > s_last && cp.s_c - s_last <= reach && cp.s_c - s_last < best) {
        best = cp.s_c - s_last;
        at = k;
      }
      if (cp.s_c < s_first && s_first - cp.s_c <= reach && s_first - cp.s_c < best) {
        best = s_first - cp.s_c;
        at = k;
      }
    }
    if (at) {
      const Vertex v{cp.s_c, cp.tau_c, *at, true};
      vertices.insert(std::upper_bound(vertices.begin(), vertices.end(), v,
                                       [](const Vertex& a, const Vertex& b) { return a.s < b.s; }),
                      v);
    }
  }
  if (vertices.empty()) return {CrossingKind::Avoids, 0.0, 0.0, std::numeric_limits<double>::infinity()};

  std::vector<double> d(vertices.size());
  std::size_t closest = 0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    d[i] = family.tau(vertices[i].s) - vertices[i].tau;
    if (std::abs(d[i]) < std::abs(d[closest])) closest = i;
  }
  const double min_distance = std::abs(d[closest]);

  std::vector<std::size_t> changes;  // sign change between i and i + 1
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
    if ((d[i] < 0.0 && d[i + 1] > 0.0) || (d[i] > 0.0 && d[i + 1] < 0.0)) changes.push_back(i);
  for (std::size_t i = 1; i + 1 < vertices.size(); ++i)
    if (d[i] == 0.0 && std::signbit(d[i - 1]) != std::signbit(d[i + 1])) changes.push_back(i);
  std::sort(changes.begin(), changes.end());

  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (!vertices[i].critical || !(std::abs(d[i]) < kTangencyTolerance)) continue;
    const bool only_adjacent = std::all_of(changes.begin(), changes.end(), [&](std::size_t c) {
      return c == i || c + 1 == i;
    });
    if (only_adjacent) return {CrossingKind::Tangent, vertices[i].s, vertices[i].tau, min_distance};
  }

  if (!changes.empty()) {
    const std::size_t i = changes.front();
    const Vertex& a = vertices[i];
    const Vertex& b = vertices[i + 1];
    if (d[i] == 0.0) return {CrossingKind::Crosses, a.s, a.tau, min_distance};
    auto gap = [&](double s) {
      const double w = (s - a.s) / (b.s - a.s);
      return family.tau(s) - (a.tau + w * (b.tau - a.tau));
    };
    double lo = a.s, hi = b.s;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (std::signbit(gap(mid)) == std::signbit(d[i]))
        lo = mid;
      else
        hi = mid;
    }
    const double s = 0.5 * (lo + hi);
    return {CrossingKind::Crosses, s, family.tau(s), min_distance, a.segment != b.segment};
  }
  const Vertex& c = vertices[closest];
  if (min_distance < kTangencyTolerance) return {CrossingKind::Tangent, c.s, c.tau, min_distance};
  return {CrossingKind::Avoids, c.s, c.tau, min_distance};
}

const char* to_string(CrossingKind kind) {
  switch (kind) {
    case CrossingKind::Crosses: return "Crosses";
    case CrossingKind::Tangent: return "Tangent";
    case CrossingKind::Avoids: return "Avoids";
  }
  return "Avoids";
}

const char* to_string(CriticalMethod method) {
  return method == CriticalMethod::ClosedForm ? "ClosedForm" : "Numeric";
}

}  // namespace lhz
