#include "nakm/rand_index.hpp"

#include <map>
#include <utility>

#include "nakm/errors.hpp"

namespace nakm {

namespace {

double pairs(double n) { return n * (n - 1.0) / 2.0; }

}  // namespace

double rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) throw InvalidInput("rand_index: labelings differ in length");
  const double n = static_cast<double>(a.size());
  if (a.size() < 2) return 1.0;

  std::map<std::pair<std::size_t, std::size_t>, double> cells;
  std::map<std::size_t, double> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cells[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  double both = 0.0, in_a = 0.0, in_b = 0.0;
  for (const auto& [key, c] : cells) both += pairs(c);
  for (const auto& [key, c] : rows) in_a += pairs(c);
  for (const auto& [key, c] : cols) in_b += pairs(c);
  const double total = pairs(n);
  // together in both + apart in both
  const double agree = both + (total - in_a - in_b + both);
  return agree / total;
}

}  // namespace nakm
