#include "circlelab/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "circlelab/errors.hpp"
#include "circlelab/random.hpp"

namespace circlelab {

namespace {

struct Square {
  double x, y, side;
};

std::vector<Complex> square_vertices(double x, double y, double side) {
  return {{x, y}, {x + side, y}, {x + side, y + side}, {x, y + side}};
}

// Remaining squares left after removing the holes of levels < k, row-major.
std::vector<Square> remaining(int k) {
  std::vector<Square> cur = {{0.0, 0.0, 1.0}};
  for (int level = 1; level < k; ++level) {
    std::vector<Square> next;
    for (const Square& s : cur) {
      const double t = s.side / 3.0;
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
          if (i != 1 || j != 1) next.push_back({s.x + i * t, s.y + j * t, t});
    }
    std::sort(next.begin(), next.end(), [](const Square& a, const Square& b) {
      return a.y != b.y ? a.y < b.y : a.x < b.x;
    });
    cur = std::move(next);
  }
  return cur;
}

struct Placed {
  Complex center;
  double radius;
};

Packing random_packing(std::uint64_t seed, double s, int count, const RandomPackingConfig& config, bool disks_only,
                       const std::string& label) {
  if (count < 0) throw DomainError("packing count must be nonnegative");
  if (!(config.first_diameter > 0.0) || !(config.region_radius > 0.0)) throw DomainError("invalid packing parameters");
  Rng rng(seed);
  Packing p;
  p.label = label;
  std::vector<Placed> placed;
  for (int i = 0; i < count; ++i) {
    const double diam = config.first_diameter * std::pow(static_cast<double>(i + 1), -s);
    const double r = 0.5 * diam;
    bool ok = false;
    for (int attempt = 0; attempt < config.max_retries && !ok; ++attempt) {
      const double rho = config.region_radius * std::sqrt(rng.uniform());
      const Complex c = std::polar(rho, 2.0 * std::numbers::pi * rng.uniform());
      const bool square = !disks_only && rng.uniform() < 0.5;
      const double angle = rng.uniform() * 0.5 * std::numbers::pi;
      ok = std::all_of(placed.begin(), placed.end(), [&](const Placed& q) {
        return std::abs(c - q.center) > r + q.radius + config.gap * std::min(r, q.radius);
      });
      if (!ok) continue;
      placed.push_back({c, r});
      if (square) {
        std::vector<Complex> v;
        for (int k = 0; k < 4; ++k) v.push_back(c + std::polar(r, angle + 0.5 * std::numbers::pi * k));
        p.continua.push_back(PeripheralContinuum::polygon(i + 1, std::move(v)));
      } else {
        p.continua.push_back(PeripheralContinuum::chart_disk(i + 1, c, r));
      }
    }
    if (!ok) throw DomainError("placement failed for continuum " + std::to_string(i + 1) + " after retries");
  }
  return p;
}

}  // namespace

std::size_t carpet_count(int level) {
  std::size_t total = 0, layer = 1;
  for (int k = 1; k <= level; ++k, layer *= 8) total += layer;
  return total;
}

Packing carpet(int level, int punctures) {
  if (level < 0 || level > 6) throw DomainError("carpet level must lie in [0, 6]");
  if (punctures < 0) throw DomainError("puncture count must be nonnegative");
  Packing p;
  p.label = "carpet(" + std::to_string(level) + ")";
  int id = 1;
  for (int k = 1; k <= level; ++k)
    for (const Square& s : remaining(k)) {
      const double t = s.side / 3.0;
      p.continua.push_back(PeripheralContinuum::polygon(id++, square_vertices(s.x + t, s.y + t, t)));
    }
  if (punctures > 0) {
    const auto next = remaining(level + 1);
    if (static_cast<std::size_t>(punctures) > next.size()) throw DomainError("too many carpet punctures requested");
    for (int i = 0; i < punctures; ++i) {
      const Square& s = next[static_cast<std::size_t>(i)];
      p.continua.push_back(PeripheralContinuum::point(id++, SpherePoint(Complex(s.x + 0.5 * s.side, s.y + 0.5 * s.side))));
    }
    p.label += "+" + std::to_string(punctures) + "pts";
  }
  return p;
}

Packing random_l2(std::uint64_t seed, double s, int count, const RandomPackingConfig& config) {
  if (!(s > 0.5)) throw DomainError("random_l2 needs exponent s > 1/2");
  return random_packing(seed, s, count, config, false, "random_l2(" + std::to_string(seed) + ")");
}

Packing round_packing(std::uint64_t seed, int count, const RandomPackingConfig& config) {
  return random_packing(seed, 1.0, count, config, true, "round(" + std::to_string(seed) + ")");
}

}  // namespace circlelab
