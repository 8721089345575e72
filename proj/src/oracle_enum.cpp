#include "substlab/oracle_enum.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace substlab {

namespace {

BitRow mask_to_row(std::uint64_t mask, std::size_t n) {
  BitRow row(n);
  for (std::size_t i = 0; i < n; ++i) row[i] = (mask >> (n - 1 - i)) & 1u;
  return row;
}

void check_distinct_y1(const InterpretationTable& t) {
  for (std::size_t i = 1; i < t.rows.size(); ++i)
    if (t.rows[i - 1].y[0] == t.rows[i].y[0])
      throw DuplicateY1("rows " + std::to_string(i) + " and " + std::to_string(i + 1) +
                        " share y1 = " + t.rows[i].y[0].str());
}

bool fits(const ExactInt& v, const ExactInt& limit) { return abs(v) <= limit; }

// Odometer over the box product with a running dot product in 64-bit
// arithmetic. Callers guarantee no partial sum can overflow.
std::vector<IntVector> scan_small(const SubstInstance& inst) {
  const std::size_t n = inst.n();
  std::vector<long long> a(n), lo(n), hi(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = inst.a()[i].convert_to<long long>();
    lo[i] = inst.boxes()[i].lo.convert_to<long long>();
    hi[i] = inst.boxes()[i].hi.convert_to<long long>();
    y[i] = lo[i];
  }
  const long long c = inst.c().convert_to<long long>();
  long long sum = 0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * lo[i];

  std::vector<IntVector> out;
  for (;;) {
    if (sum == c) out.emplace_back(y.begin(), y.end());
    std::size_t i = n;
    while (i-- > 0) {
      if (y[i] < hi[i]) {
        ++y[i];
        sum += a[i];
        break;
      }
      sum -= a[i] * (y[i] - lo[i]);
      y[i] = lo[i];
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

std::vector<IntVector> scan_exact(const SubstInstance& inst) {
  const std::size_t n = inst.n();
  IntVector y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = inst.boxes()[i].lo;
  ExactInt sum = dot(inst.a(), y);
  std::vector<IntVector> out;
  for (;;) {
    if (sum == inst.c()) out.push_back(y);
    std::size_t i = n;
    while (i-- > 0) {
      const Box& b = inst.boxes()[i];
      if (y[i] < b.hi) {
        ++y[i];
        sum += inst.a()[i];
        break;
      }
      sum -= inst.a()[i] * (y[i] - b.lo);
      y[i] = b.lo;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

}  // namespace

IntVector to_int_vector(const BitRow& x) {
  IntVector v;
  v.reserve(x.size());
  for (auto b : x) v.emplace_back(b);
  return v;
}

std::string to_string(const BitRow& x) {
  std::string s;
  for (auto b : x) s.push_back(b ? '1' : '0');
  return s;
}

XEnumeration enum_x(std::size_t n, std::size_t c) {
  XEnumeration out;
  if (c > n) {
    out.empty_domain = true;
    return out;
  }
  if (n > 63) throw EnumError("enum_x supports n <= 63");
  if (c == 0) {
    out.rows.push_back(BitRow(n, 0));
    return out;
  }
  // x_1 is the most significant bit, so ascending masks are ascending
  // lexicographic rows. Gosper's hack steps to the next mask with c bits.
  const std::uint64_t limit = std::uint64_t{1} << n;
  std::uint64_t mask = (std::uint64_t{1} << c) - 1;
  while (mask < limit) {
    out.rows.push_back(mask_to_row(mask, n));
    const std::uint64_t low = mask & (~mask + 1);
    const std::uint64_t ripple = mask + low;
    if (ripple == 0) break;
    mask = ripple | (((mask ^ ripple) >> 2) / low);
  }
  return out;
}

InterpretationTable build_table(const SubstSystem& s, TableOrder order, Counters* counters) {
  InterpretationTable t;
  t.order = order;
  const std::size_t n = s.n();
  if (s.c() >= 0 && s.c() <= n) {
    for (auto& x : enum_x(n, s.c().convert_to<std::size_t>()).rows) {
      IntVector y = s.apply(to_int_vector(x));
      if (counters) counters->consider(n * n + n);
      t.rows.push_back({std::move(x), std::move(y)});
    }
  }
  if (order == TableOrder::descending_y1) {
    std::stable_sort(t.rows.begin(), t.rows.end(),
                     [](const InterpretationRow& a, const InterpretationRow& b) {
                       return a.y[0] > b.y[0];
                     });
    check_distinct_y1(t);
  }
  return t;
}

ExactInt box_volume(const SubstInstance& inst) {
  ExactInt v = 1;
  for (const auto& b : inst.boxes()) v *= b.hi - b.lo + 1;
  return v;
}

std::vector<IntVector> enum_y_bruteforce(const SubstInstance& inst, std::uint64_t budget,
                                         Counters* counters) {
  const ExactInt volume = box_volume(inst);
  if (volume > budget) throw BudgetExceeded(volume, budget);
  const std::size_t n = inst.n();

  // Bound every partial sum |Σ a_i y_i| before committing to 64-bit math.
  const ExactInt limit = ExactInt(1) << 61;
  bool small = fits(inst.c(), limit);
  ExactInt worst = 0;
  for (std::size_t i = 0; i < n && small; ++i) {
    const Box& b = inst.boxes()[i];
    small = fits(inst.a()[i], limit) && fits(b.lo, limit) && fits(b.hi, limit);
    worst += abs(inst.a()[i]) * std::max(abs(b.lo), abs(b.hi));
  }
  small = small && worst <= limit;

  if (counters) counters->consider_many(volume.convert_to<std::uint64_t>(), n);
  return small ? scan_small(inst) : scan_exact(inst);
}

BijectionReport verify_bijection(const SubstInstance& inst, const SubstSystem& s,
                                 std::uint64_t budget, Counters* counters) {
  if (inst.n() != s.n()) throw ShapeMismatch("instance and system dimensions differ");
  const std::size_t n = s.n();
  const auto ys = enum_y_bruteforce(inst, budget, counters);
  const std::set<IntVector> solutions(ys.begin(), ys.end());

  BijectionReport r;
  r.y_count = solutions.size();
  std::set<IntVector> image;
  if (s.c() >= 0 && s.c() <= n) {
    for (const auto& x : enum_x(n, s.c().convert_to<std::size_t>()).rows) {
      const IntVector xv = to_int_vector(x);
      IntVector y = s.apply(xv);
      if (counters) counters->consider(n * n + 2 * n);
      ++r.x_count;
      if (!inst.in_boxes(y)) {
        r.out_of_box_x.push_back(x);
        continue;
      }
      if (solutions.count(y)) {
        if (s.preimage(y) != xv)
          throw std::logic_error("preimage of " + to_string(y) + " is not " + to_string(x));
        ++r.matched;
      }
      image.insert(std::move(y));
    }
  }
  for (const auto& y : ys)
    if (!image.count(y)) r.extra_y.push_back(y);
  return r;
}

SubstInstance tighten_L1(const SubstInstance& inst, const InterpretationTable& table,
                         std::size_t k) {
  if (table.order != TableOrder::descending_y1)
    throw EnumError("tightening needs a table sorted by descending y1");
  check_distinct_y1(table);
  if (k < 1 || k > table.rows.size())
    throw IndexOutOfRange("row " + std::to_string(k) + " outside 1.." +
                          std::to_string(table.rows.size()));
  Box b = inst.boxes()[0];
  b.lo = table.rows[k - 1].y[0] + 1;
  if (b.hi < b.lo) b.hi = b.lo;
  return inst.with_box(0, std::move(b));
}

IndependenceWitness independence_witness(const SubstSystem& s, std::size_t k) {
  const SubstInstance base = instance_from_system(s);
  InterpretationTable table = build_table(s, TableOrder::descending_y1);
  SubstInstance tightened = tighten_L1(base, table, k);
  IndependenceWitness w{std::move(tightened), std::move(table), {}, k};
  for (std::size_t r = 1; r < k; ++r) {
    if (!w.instance.feasible(w.table.rows[r - 1].y))
      throw std::logic_error("row " + std::to_string(r) + " lost feasibility");
    w.satisfied_rows.push_back(r);
  }
  if (w.instance.feasible(w.table.rows[k - 1].y))
    throw std::logic_error("row " + std::to_string(k) + " still feasible");
  return w;
}

ThroughputReport throughput_report(std::uint64_t infs, std::uint64_t steps) {
  if (steps == 0) throw NoSteps("throughput undefined with zero steps");
  if (infs > steps)
    throw AccountingViolation(std::to_string(infs) + " infs exceed " + std::to_string(steps) +
                              " steps");
  return {infs, steps, Rational(infs, steps)};
}

}  // namespace substlab
