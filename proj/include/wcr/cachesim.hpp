#pragma once

// Trace-driven LRU cache model used to build miss-ratio curves and estimate
// instruction / data footprints.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wcr {

enum class AccessKind : std::uint8_t { IFetch = 0, Load = 1, Store = 2 };

struct Access {
  std::uint64_t address = 0;
  AccessKind kind = AccessKind::Load;

  bool operator==(const Access&) const = default;
};

// Set of access kinds a simulation looks at.
class KindFilter {
 public:
  constexpr KindFilter() = default;
  constexpr KindFilter(std::initializer_list<AccessKind> kinds) {
    for (auto k : kinds) bits_ |= bit(k);
  }
  static constexpr KindFilter instruction() { return {AccessKind::IFetch}; }
  static constexpr KindFilter data() { return {AccessKind::Load, AccessKind::Store}; }
  static constexpr KindFilter unified() { return {AccessKind::IFetch, AccessKind::Load, AccessKind::Store}; }

  constexpr bool contains(AccessKind k) const { return (bits_ & bit(k)) != 0; }
  constexpr bool operator==(const KindFilter&) const = default;

 private:
  static constexpr std::uint8_t bit(AccessKind k) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(k)); }
  std::uint8_t bits_ = 0;
};

enum class CurveKind { Instruction, Data, Unified };

CurveKind curve_kind(KindFilter f);
KindFilter filter_for(CurveKind k);
std::string to_string(CurveKind k);
CurveKind parse_curve_kind(const std::string& s);

struct CacheConfig {
  std::uint64_t capacity_bytes = 32 * 1024;
  std::uint64_t line_bytes = 64;
  std::optional<std::uint32_t> associativity = 8;  // nullopt = fully associative
  bool write_allocate = true;

  std::uint64_t lines() const { return capacity_bytes / line_bytes; }
  std::uint64_t ways() const { return associativity ? *associativity : lines(); }
  std::uint64_t sets() const { return lines() / ways(); }
};

// Throws ValidationError: line size must be a power of two, capacity a
// multiple of line_bytes * associativity.
void check_config(const CacheConfig& c);

struct SimResult {
  std::uint64_t accesses = 0;
  std::uint64_t misses = 0;
  double miss_ratio = 0.0;
};

// Cold-start LRU simulation over the filtered accesses. Stores allocate on a
// miss unless write_allocate is off.
SimResult simulate(std::span<const Access> segment, const CacheConfig& config, KindFilter filter);

// Independent miss count from per-set LRU stack distances: an access misses
// when it is a first touch or its stack distance within its set is >= ways.
std::uint64_t stack_distance_oracle(std::span<const Access> segment, std::uint64_t capacity_lines,
                                    std::uint64_t set_count, KindFilter filter,
                                    std::uint64_t line_bytes = 64, bool write_allocate = true);

struct TraceSegment {
  double weight = 1.0;
  std::vector<Access> accesses;
};

struct AccessTrace {
  std::vector<TraceSegment> segments;
};

// Weights positive and summing to 1 (within 1e-9); every segment non-empty.
void check_trace(const AccessTrace& t);

// Rescales weights to sum to 1.
AccessTrace normalize_weights(AccessTrace t);

// Drops the first `n` accesses of the concatenated trace (fast-forward past
// an initialization phase). Throws if a segment ends up empty.
AccessTrace skip_accesses(AccessTrace t, std::uint64_t n);

struct CurvePoint {
  std::uint64_t capacity_bytes = 0;
  double miss_ratio = 0.0;

  bool operator==(const CurvePoint&) const = default;
};

struct MissRatioCurve {
  std::vector<CurvePoint> points;
  CurveKind kind = CurveKind::Unified;
};

// 16 KB, 32 KB, ..., 8192 KB.
std::vector<std::uint64_t> default_capacity_grid();

// Per capacity, the weighted mean of the per-segment miss ratios. The
// template supplies line size, associativity and allocation policy.
MissRatioCurve sweep_capacities(const AccessTrace& trace, const std::vector<std::uint64_t>& sizes,
                                const CacheConfig& config_template, KindFilter filter);

inline constexpr double kDefaultKneeRatio = 0.01;

// Smallest listed capacity whose miss ratio is strictly below the knee.
std::optional<std::uint64_t> estimate_footprint(const MissRatioCurve& curve, double knee_ratio = kDefaultKneeRatio);

// Binary trace: packed little-endian records of (u64 address, u8 kind).
// Sidecar JSON: {"segments": [{"offset": n, "count": n, "weight": w}, ...]},
// offsets and counts in records. Without a sidecar the trace is one segment.
AccessTrace read_binary_trace(const std::string& path, const std::string& sidecar_path = "");
void write_binary_trace(const std::string& path, const AccessTrace& trace, const std::string& sidecar_path = "");

// Text trace: `kind address-hex` per line, kind one of I/L/S (or
// ifetch/load/store). Lines starting with '#' are comments.
AccessTrace read_text_trace(const std::string& path, const std::string& sidecar_path = "");
void write_text_trace(const std::string& path, const AccessTrace& trace);

// Picks the reader by extension: `.bin` is binary, anything else text. A
// sibling `<path>.json` is used as sidecar when present.
AccessTrace read_trace(const std::string& path);

// Parses sizes like "16K", "1M", "4096".
std::uint64_t parse_size(const std::string& s);

std::string curve_to_csv(const MissRatioCurve& c);
MissRatioCurve parse_curve_csv(const std::string& text, CurveKind kind = CurveKind::Unified);

}  // namespace wcr
