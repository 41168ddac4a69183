#include "hypwave/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "hypwave/errors.hpp"

namespace hypwave {
namespace {

constexpr double kFaceTieTolerance = 1e-9;
constexpr int kMaxReductionSteps = 10'000;

// Euclidean cell hashing of orbit points. Distinct orbit points are >= 2 r_I
// apart hyperbolically, so anything closer than kSameElement is a duplicate.
constexpr double kCellSize = 1e-7;
constexpr double kSameElement = 1.0;

struct CellKey {
  std::int64_t i, j;
  bool operator==(const CellKey&) const = default;
};
struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    return std::hash<std::int64_t>()(k.i * 0x9E3779B97F4A7C15ull ^ k.j);
  }
};

CellKey cell_of(Complex z) {
  return {static_cast<std::int64_t>(std::floor(z.real() / kCellSize)),
          static_cast<std::int64_t>(std::floor(z.imag() / kCellSize))};
}

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

FuchsianGroup::FuchsianGroup() {
  const double sqrt2 = std::sqrt(2.0);
  const double diag = 1.0 + sqrt2;
  const double off = std::sqrt(2.0 + 2.0 * sqrt2);
  for (int k = 0; k < 8; ++k) {
    generators_[k] = MobiusMap(Complex(diag, 0.0), std::polar(off, k * kPi / 4.0));
    neighbour_centres_[k] = generators_[k].apply(DiskPoint());
  }

  config_.volume = 4.0 * kPi;
  config_.inradius = 0.5 * generators_[0].displacement();
  // Regular octagon with angles pi/4: cosh(R_c) = cot^2(pi/8).
  const double cot = 1.0 / std::tan(kPi / 8.0);
  config_.circumradius = std::acosh(cot * cot);
  const double vertex_radius = std::tanh(0.5 * config_.circumradius);
  for (int k = 0; k < 8; ++k) {
    config_.vertices[k] = DiskPoint(std::polar(vertex_radius, kPi / 8.0 + k * kPi / 4.0));
  }

  const auto small = build_ball(6.0);
  double min_disp = std::numeric_limits<double>::infinity();
  for (const auto& e : small) {
    if (!e.word.empty()) min_disp = std::min(min_disp, e.displacement);
  }
  config_.injectivity_radius = 0.5 * min_disp;
}

const FuchsianGroup& FuchsianGroup::bolza() {
  static const FuchsianGroup instance;
  return instance;
}

void FuchsianGroup::set_limits(double max_radius, std::size_t max_elements) {
  std::lock_guard lock(cache_mutex_);
  max_radius_ = max_radius;
  max_elements_ = max_elements;
}

MobiusMap FuchsianGroup::relator() const {
  const auto& g = generators_;
  return g[0] * g[5] * g[2] * g[7] * g[4] * g[1] * g[6] * g[3];
}

bool FuchsianGroup::in_domain(const DiskPoint& z, double tolerance) const {
  const double d0 = hyp_distance(z, DiskPoint());
  for (const auto& c : neighbour_centres_) {
    if (d0 > hyp_distance(z, c) + tolerance) return false;
  }
  return true;
}

Reduction FuchsianGroup::reduce(const DiskPoint& z) const {
  Reduction out{z, MobiusMap::identity(), 0};
  Complex w = z.z();
  for (;;) {
    const double current = std::norm(w);
    int best = -1;
    double best_norm = current;
    for (int k = 0; k < 8; ++k) {
      const double n = std::norm(generators_[k].apply_raw(w));
      // Strict decrease with a relative margin keeps boundary points fixed.
      if (n < best_norm * (1.0 - 1e-13) - 1e-15 && n < best_norm) {
        best_norm = n;
        best = k;
      }
    }
    if (best < 0) break;
    w = generators_[best].apply_raw(w);
    out.lift = out.lift * generators_[inverse_index(best)];
    if (++out.steps > kMaxReductionSteps) {
      std::ostringstream os;
      os.precision(17);
      os << "reduction of (" << z.u() << ", " << z.v() << ") did not terminate";
      throw BoundaryPathologyError(os.str());
    }
  }
  // Deterministic tie-break on paired faces: prefer the lower face index.
  DiskPoint p(w);
  for (int m = 4; m < 8; ++m) {
    const double gap = hyp_distance(p, neighbour_centres_[m]) - hyp_distance(p, DiskPoint());
    if (std::abs(gap) < kFaceTieTolerance) {
      const int k = m - 4;
      p = DiskPoint(generators_[k].apply_raw(p.z()));
      out.lift = out.lift * generators_[m];
      ++out.steps;
    }
  }
  out.point = p;
  return out;
}

double FuchsianGroup::quotient_distance(const DiskPoint& z, const DiskPoint& w) const {
  const DiskPoint a = reduce(z).point;
  const DiskPoint b = reduce(w).point;
  double best = std::numeric_limits<double>::infinity();
  const auto translates = ball(2.0 * config_.circumradius + 1e-6);
  for (const auto& e : *translates) {
    best = std::min(best, hyp_distance(a, DiskPoint(e.map.apply_raw(b.z()))));
  }
  return best;
}

std::vector<GroupElement> FuchsianGroup::build_ball(double radius) const {
  // Tiles meeting the segment [0, g(0)] have centres within radius + R_c of
  // the origin and are linked by face adjacency, so pruning there is safe.
  const double circumradius =
      config_.circumradius > 0.0 ? config_.circumradius : std::acosh(std::pow(1.0 / std::tan(kPi / 8.0), 2));
  const double prune = radius + circumradius + 1e-9;

  std::vector<GroupElement> all;
  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> cells;
  auto find_duplicate = [&](Complex p) -> bool {
    const CellKey c = cell_of(p);
    for (std::int64_t di = -1; di <= 1; ++di) {
      for (std::int64_t dj = -1; dj <= 1; ++dj) {
        auto it = cells.find({c.i + di, c.j + dj});
        if (it == cells.end()) continue;
        for (std::size_t idx : it->second) {
          const Complex q = all[idx].map.apply_raw(Complex(0.0, 0.0));
          const double d = 2.0 * std::atanh(std::min(std::abs(p - q) / std::abs(1.0 - std::conj(q) * p), 1.0));
          if (d < kSameElement) return true;
        }
      }
    }
    return false;
  };
  auto insert = [&](GroupElement e) {
    const Complex p = e.map.apply_raw(Complex(0.0, 0.0));
    cells[cell_of(p)].push_back(all.size());
    all.push_back(std::move(e));
    if (all.size() > max_elements_) {
      std::ostringstream os;
      os << "group ball of radius " << radius << " exceeds " << max_elements_ << " elements";
      throw ResourceError(os.str());
    }
  };

  insert({MobiusMap::identity(), {}, 0.0});
  std::vector<std::size_t> frontier{0};
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t idx : frontier) {
      for (int k = 0; k < 8; ++k) {
        const Word& w = all[idx].word;
        if (!w.empty() && w.back() == inverse_index(k)) continue;
        MobiusMap m = all[idx].map * generators_[k];
        const double disp = m.displacement();
        if (disp > prune) continue;
        const Complex p = m.apply_raw(Complex(0.0, 0.0));
        if (find_duplicate(p)) continue;
        Word word = w;
        word.push_back(static_cast<std::uint8_t>(k));
        next.push_back(all.size());
        insert({m, std::move(word), disp});
      }
    }
    frontier = std::move(next);
  }

  std::vector<GroupElement> out;
  for (auto& e : all) {
    if (e.displacement <= radius) out.push_back(std::move(e));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const GroupElement& a, const GroupElement& b) { return shortlex_less(a.word, b.word); });
  return out;
}

std::shared_ptr<const std::vector<GroupElement>> FuchsianGroup::ball(double radius) const {
  if (radius < 0.0) radius = 0.0;
  std::lock_guard lock(cache_mutex_);
  if (radius > max_radius_) {
    std::ostringstream os;
    os << "group ball radius " << radius << " exceeds the configured maximum " << max_radius_;
    throw HorizonTooLargeError(os.str());
  }
  if (!cached_ball_ || cached_radius_ < radius) {
    // Grow geometrically so repeated small increases do not rebuild.
    const double target = std::min(max_radius_, std::max(radius, cached_radius_ + 1.0));
    cached_ball_ = std::make_shared<const std::vector<GroupElement>>(build_ball(target));
    cached_radius_ = target;
  }
  if (cached_radius_ == radius) return cached_ball_;
  auto filtered = std::make_shared<std::vector<GroupElement>>();
  for (const auto& e : *cached_ball_) {
    if (e.displacement <= radius) filtered->push_back(e);
  }
  return filtered;
}

Reduction reduce(const DiskPoint& z) { return FuchsianGroup::bolza().reduce(z); }

std::vector<GroupElement> group_ball(double radius) { return *FuchsianGroup::bolza().ball(radius); }

DiskPoint uniform_point(CounterRng& rng) {
  // Rejection from the Euclidean disk through the vertices with density
  // proportional to the area element lambda^2.
  const FuchsianGroup& g = FuchsianGroup::bolza();
  const double rv = std::tanh(0.5 * g.config().circumradius);
  const double top = 1.0 / std::pow(1.0 - rv * rv, 2);
  for (;;) {
    const Complex z = std::polar(rv * std::sqrt(rng.uniform()), kTwoPi * rng.uniform());
    if (rng.uniform() * top > 1.0 / std::pow(1.0 - std::norm(z), 2)) continue;
    const DiskPoint x(z);
    if (g.in_domain(x, 0.0)) return x;
  }
}

}  // namespace hypwave
