#include "wcr/cachesim.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <list>
#include <sstream>
#include <unordered_map>

#include "wcr/csv.hpp"
#include "wcr/error.hpp"

namespace wcr {

CurveKind curve_kind(KindFilter f) {
  if (f == KindFilter::instruction()) return CurveKind::Instruction;
  if (!f.contains(AccessKind::IFetch)) return CurveKind::Data;
  return CurveKind::Unified;
}

KindFilter filter_for(CurveKind k) {
  switch (k) {
    case CurveKind::Instruction: return KindFilter::instruction();
    case CurveKind::Data: return KindFilter::data();
    case CurveKind::Unified: return KindFilter::unified();
  }
  return KindFilter::unified();
}

std::string to_string(CurveKind k) {
  switch (k) {
    case CurveKind::Instruction: return "instruction";
    case CurveKind::Data: return "data";
    case CurveKind::Unified: return "unified";
  }
  return "unified";
}

CurveKind parse_curve_kind(const std::string& s) {
  std::string k;
  for (char c : s) k.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (k == "instruction" || k == "i" || k == "l1i") return CurveKind::Instruction;
  if (k == "data" || k == "d" || k == "l1d") return CurveKind::Data;
  if (k == "unified" || k == "u") return CurveKind::Unified;
  throw ValidationError("unknown curve kind '" + s + "'");
}

void check_config(const CacheConfig& c) {
  if (c.line_bytes == 0 || !std::has_single_bit(c.line_bytes)) {
    throw ValidationError("line size must be a positive power of two");
  }
  if (c.capacity_bytes == 0 || c.capacity_bytes % c.line_bytes != 0) {
    throw ValidationError("capacity " + std::to_string(c.capacity_bytes) + " is not a positive multiple of the line size");
  }
  if (c.associativity) {
    if (*c.associativity == 0) throw ValidationError("associativity must be positive");
    if (c.lines() % *c.associativity != 0) {
      throw ValidationError("capacity " + std::to_string(c.capacity_bytes) + " does not give an integral set count at " +
                            std::to_string(*c.associativity) + " ways");
    }
  }
}

namespace {

// Small-way sets: MRU-first tag arrays scanned linearly.
class ArrayLru {
 public:
  ArrayLru(std::uint64_t sets, std::uint64_t ways)
      : ways_(ways), tags_(sets * ways), fill_(sets, 0) {}

  bool access(std::uint64_t set, std::uint64_t line, bool allocate) {
    std::uint64_t* base = tags_.data() + set * ways_;
    std::uint64_t& n = fill_[set];
    for (std::uint64_t i = 0; i < n; ++i) {
      if (base[i] == line) {
        std::rotate(base, base + i, base + i + 1);
        return true;
      }
    }
    if (allocate) {
      if (n < ways_) ++n;
      std::copy_backward(base, base + n - 1, base + n);
      base[0] = line;
    }
    return false;
  }

 private:
  std::uint64_t ways_;
  std::vector<std::uint64_t> tags_;
  std::vector<std::uint64_t> fill_;
};

// High-associativity sets: recency list per set plus a line index.
class ListLru {
 public:
  ListLru(std::uint64_t sets, std::uint64_t ways) : ways_(ways), sets_(sets) {}

  bool access(std::uint64_t set, std::uint64_t line, bool allocate) {
    auto& order = sets_[set];
    if (auto it = where_.find(line); it != where_.end()) {
      order.splice(order.begin(), order, it->second);
      return true;
    }
    if (allocate) {
      if (order.size() == ways_) {
        where_.erase(order.back());
        order.pop_back();
      }
      order.push_front(line);
      where_.emplace(line, order.begin());
    }
    return false;
  }

 private:
  std::uint64_t ways_;
  std::vector<std::list<std::uint64_t>> sets_;
  std::unordered_map<std::uint64_t, std::list<std::uint64_t>::iterator> where_;
};

template <typename Cache>
SimResult run(std::span<const Access> segment, const CacheConfig& config, KindFilter filter, Cache cache) {
  const unsigned shift = static_cast<unsigned>(std::countr_zero(config.line_bytes));
  const std::uint64_t sets = config.sets();
  SimResult r;
  for (const auto& a : segment) {
    if (!filter.contains(a.kind)) continue;
    const std::uint64_t line = a.address >> shift;
    const bool allocate = config.write_allocate || a.kind != AccessKind::Store;
    ++r.accesses;
    if (!cache.access(line % sets, line, allocate)) ++r.misses;
  }
  return r;
}

// Fenwick tree over positions 1..n.
class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
  void add(std::size_t i, int delta) {
    for (++i; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }
  // Sum over positions [0, i).
  long long prefix(std::size_t i) const {
    long long s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

 private:
  std::vector<long long> tree_;
};

}  // namespace

SimResult simulate(std::span<const Access> segment, const CacheConfig& config, KindFilter filter) {
  check_config(config);
  constexpr std::uint64_t kArrayMaxWays = 32;
  SimResult r = config.ways() <= kArrayMaxWays
                    ? run(segment, config, filter, ArrayLru(config.sets(), config.ways()))
                    : run(segment, config, filter, ListLru(config.sets(), config.ways()));
  if (r.accesses == 0) throw ValidationError("simulation: no accesses of the selected kinds");
  r.miss_ratio = static_cast<double>(r.misses) / static_cast<double>(r.accesses);
  return r;
}

std::uint64_t stack_distance_oracle(std::span<const Access> segment, std::uint64_t capacity_lines,
                                    std::uint64_t set_count, KindFilter filter, std::uint64_t line_bytes,
                                    bool write_allocate) {
  if (set_count == 0 || capacity_lines % set_count != 0) {
    throw ValidationError("oracle: capacity_lines must be a multiple of set_count");
  }
  const std::uint64_t ways = capacity_lines / set_count;

  // Split the filtered stream into per-set subsequences; each set is an
  // independent LRU stack.
  std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint64_t, bool>>> per_set;
  for (const auto& a : segment) {
    if (!filter.contains(a.kind)) continue;
    const std::uint64_t line = a.address / line_bytes;
    per_set[line % set_count].emplace_back(line, write_allocate || a.kind != AccessKind::Store);
  }

  std::uint64_t misses = 0;
  for (const auto& [set, refs] : per_set) {
    Fenwick marks(refs.size());
    std::unordered_map<std::uint64_t, std::size_t> last_touch;
    for (std::size_t t = 0; t < refs.size(); ++t) {
      const auto [line, allocate] = refs[t];
      const auto it = last_touch.find(line);
      bool hit = false;
      if (it != last_touch.end()) {
        // Distinct lines touched strictly after the previous touch.
        const auto distance = static_cast<std::uint64_t>(marks.prefix(t) - marks.prefix(it->second + 1));
        hit = distance < ways;
      }
      if (!hit) ++misses;
      if (hit || allocate) {
        if (it != last_touch.end()) marks.add(it->second, -1);
        marks.add(t, +1);
        last_touch[line] = t;
      }
    }
  }
  return misses;
}

// ---------------------------------------------------------------------------
// Traces

void check_trace(const AccessTrace& t) {
  if (t.segments.empty()) throw ValidationError("trace has no segments");
  double total = 0.0;
  for (std::size_t i = 0; i < t.segments.size(); ++i) {
    const auto& s = t.segments[i];
    if (!(s.weight > 0.0) || !std::isfinite(s.weight)) {
      throw ValidationError("segment " + std::to_string(i) + " has a non-positive weight");
    }
    if (s.accesses.empty()) throw ValidationError("segment " + std::to_string(i) + " is empty");
    total += s.weight;
  }
  if (std::fabs(total - 1.0) > 1e-9) throw ValidationError("segment weights sum to " + std::to_string(total) + ", not 1");
}

AccessTrace normalize_weights(AccessTrace t) {
  double total = 0.0;
  for (const auto& s : t.segments) {
    if (!(s.weight > 0.0)) throw ValidationError("segment weights must be positive");
    total += s.weight;
  }
  for (auto& s : t.segments) s.weight /= total;
  return t;
}

AccessTrace skip_accesses(AccessTrace t, std::uint64_t n) {
  for (std::size_t i = 0; i < t.segments.size() && n > 0; ++i) {
    auto& acc = t.segments[i].accesses;
    const std::uint64_t drop = std::min<std::uint64_t>(n, acc.size());
    acc.erase(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(drop));
    n -= drop;
    if (acc.empty()) throw ValidationError("skipping accesses empties segment " + std::to_string(i));
  }
  return t;
}

std::vector<std::uint64_t> default_capacity_grid() {
  std::vector<std::uint64_t> grid;
  for (std::uint64_t kb = 16; kb <= 8192; kb *= 2) grid.push_back(kb * 1024);
  return grid;
}

MissRatioCurve sweep_capacities(const AccessTrace& trace, const std::vector<std::uint64_t>& sizes,
                                const CacheConfig& config_template, KindFilter filter) {
  if (sizes.empty()) throw ValidationError("capacity sweep needs at least one size");
  check_trace(trace);
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw ValidationError("capacities must be strictly increasing");
  }

  MissRatioCurve curve;
  curve.kind = curve_kind(filter);
  double weight_sum = 0.0;
  for (const auto& s : trace.segments) weight_sum += s.weight;

  for (const std::uint64_t size : sizes) {
    CacheConfig cfg = config_template;
    cfg.capacity_bytes = size;
    check_config(cfg);
    double ratio = 0.0;
    for (std::size_t i = 0; i < trace.segments.size(); ++i) {
      const auto& seg = trace.segments[i];
      try {
        ratio += seg.weight * simulate(seg.accesses, cfg, filter).miss_ratio;
      } catch (const ValidationError& e) {
        throw ValidationError("segment " + std::to_string(i) + ": " + e.what());
      }
    }
    curve.points.push_back({size, std::clamp(ratio / weight_sum, 0.0, 1.0)});
  }
  return curve;
}

std::optional<std::uint64_t> estimate_footprint(const MissRatioCurve& curve, double knee_ratio) {
  if (curve.points.empty()) throw ValidationError("footprint: empty curve");
  for (const auto& p : curve.points) {
    if (p.miss_ratio < knee_ratio) return p.capacity_bytes;
  }
  return std::nullopt;
}

std::uint64_t parse_size(const std::string& s) {
  std::size_t i = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == 0) throw ValidationError("bad size '" + s + "'");
  const std::uint64_t base = std::stoull(s.substr(0, i));
  std::string unit;
  for (char c : s.substr(i)) {
    if (!std::isspace(static_cast<unsigned char>(c))) unit.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  if (unit.empty() || unit == "B") return base;
  if (unit == "K" || unit == "KB" || unit == "KIB") return base << 10;
  if (unit == "M" || unit == "MB" || unit == "MIB") return base << 20;
  if (unit == "G" || unit == "GB" || unit == "GIB") return base << 30;
  throw ValidationError("bad size unit in '" + s + "'");
}

std::string curve_to_csv(const MissRatioCurve& c) {
  std::ostringstream out;
  out << "capacity_bytes,miss_ratio\n";
  char buf[64];
  for (const auto& p : c.points) {
    std::snprintf(buf, sizeof buf, "%.6f", p.miss_ratio);
    out << p.capacity_bytes << ',' << buf << '\n';
  }
  return out.str();
}

MissRatioCurve parse_curve_csv(const std::string& text, CurveKind kind) {
  std::istringstream in(text);
  std::size_t line_no = 0;
  csv::expect_header(in, line_no, {"capacity_bytes", "miss_ratio"});
  MissRatioCurve c;
  c.kind = kind;
  std::string line;
  while (csv::next_line(in, line, line_no)) {
    const auto f = csv::split(line);
    if (f.size() != 2) throw ValidationError("line " + std::to_string(line_no) + ": expected 2 fields");
    CurvePoint p{csv::to_uint(f[0], line_no, "capacity_bytes"), csv::to_double(f[1], line_no, "miss_ratio")};
    if (p.miss_ratio < 0.0 || p.miss_ratio > 1.0) {
      throw ValidationError("line " + std::to_string(line_no) + ": miss_ratio outside [0,1]");
    }
    if (!c.points.empty() && p.capacity_bytes <= c.points.back().capacity_bytes) {
      throw ValidationError("line " + std::to_string(line_no) + ": capacities must be strictly increasing");
    }
    c.points.push_back(p);
  }
  return c;
}

}  // namespace wcr
