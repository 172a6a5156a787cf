#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "nuqrom/errors.hpp"
#include "nuqrom/linalg.hpp"
#include "nuqrom/registers.hpp"
#include "nuqrom/util.hpp"

namespace nuqrom {

using json = nlohmann::json;

inline constexpr i64 kDefaultEnumerationCap = 1'000'000;

// An explicit function H: [N] -> [M] stored as a value array.
struct OracleTable {
  i64 domain_size = 0;
  i64 range_size = 0;
  std::vector<int> entries;

  OracleTable() = default;
  OracleTable(i64 n, i64 m, std::vector<int> e)
      : domain_size(n), range_size(m), entries(std::move(e)) {
    validate();
  }

  void validate() const {
    if (domain_size < 1 || range_size < 1)
      throw DimensionMismatch("oracle table needs positive domain and range");
    if (static_cast<i64>(entries.size()) != domain_size)
      throw DimensionMismatch("oracle table entry count != domain size");
    for (int v : entries)
      if (v < 0 || v >= range_size)
        throw DimensionMismatch("oracle table entry out of range");
  }

  int at(i64 x) const { return entries[static_cast<std::size_t>(x)]; }

  bool operator==(const OracleTable& o) const {
    return domain_size == o.domain_size && range_size == o.range_size &&
           entries == o.entries;
  }
};

inline void to_json(json& j, const OracleTable& t) {
  j = json{{"n", t.domain_size}, {"m", t.range_size}, {"entries", t.entries}};
}

inline void from_json(const json& j, OracleTable& t) {
  t.domain_size = j.at("n").get<i64>();
  t.range_size = j.at("m").get<i64>();
  t.entries = j.at("entries").get<std::vector<int>>();
  t.validate();
}

// A salted oracle [K] x [N] -> [M] stored flat; (s, x) maps to s*N + x.
struct SaltedOracleTable {
  i64 salt_space = 1;
  OracleTable inner;

  SaltedOracleTable(i64 k, OracleTable table) : salt_space(k), inner(std::move(table)) {
    if (salt_space < 1) throw DimensionMismatch("salt space must be positive");
    if (inner.domain_size % salt_space != 0)
      throw DimensionMismatch("salted table domain not divisible by salt space");
  }

  i64 slice_domain() const { return inner.domain_size / salt_space; }
};

inline OracleTable salted_view(const SaltedOracleTable& h, i64 s) {
  if (s < 0 || s >= h.salt_space) throw SaltOutOfRange("salt out of range");
  i64 n = h.slice_domain();
  std::vector<int> entries(h.inner.entries.begin() + s * n,
                           h.inner.entries.begin() + (s + 1) * n);
  return OracleTable(n, h.inner.range_size, std::move(entries));
}

inline OracleTable salted_view(const OracleTable& h, i64 salt_space, i64 s) {
  return salted_view(SaltedOracleTable(salt_space, h), s);
}

// Lazily sampled oracle; a point's value is drawn on first query and never
// changes afterwards. Randomness is consumed in query order from `seed`, so
// a run with the same query sequence replays the same transcript.
class LazyOracle {
public:
  LazyOracle(i64 n, i64 m, std::uint64_t seed)
      : domain_size_(n), range_size_(m), rng_(seed) {
    if (n < 1 || m < 1) throw DimensionMismatch("lazy oracle needs positive sizes");
  }

  int query(i64 x) {
    if (x < 0 || x >= domain_size_) throw DimensionMismatch("lazy query out of domain");
    auto it = assigned_.find(x);
    if (it != assigned_.end()) return it->second;
    std::uniform_int_distribution<int> d(0, static_cast<int>(range_size_ - 1));
    int v = d(rng_);
    assigned_.emplace(x, v);
    return v;
  }

  i64 domain_size() const { return domain_size_; }
  i64 range_size() const { return range_size_; }
  std::size_t assigned_count() const { return assigned_.size(); }
  bool is_assigned(i64 x) const { return assigned_.count(x) > 0; }

private:
  i64 domain_size_;
  i64 range_size_;
  std::unordered_map<i64, int> assigned_;
  Rng rng_;
};

// Distribution over oracle tables: exhaustive enumeration of all M^N
// functions, or a seeded uniform sample. Tables are materialized on demand;
// only the mode and seed are ever serialized.
class OracleEnsemble {
public:
  enum class Mode { Exhaustive, Sampled };

  static OracleEnsemble exhaustive(i64 n, i64 m, i64 cap = kDefaultEnumerationCap) {
    long double total = std::pow(static_cast<long double>(m), static_cast<long double>(n));
    if (!(total <= static_cast<long double>(cap)))
      throw CapExceeded("M^N exceeds the enumeration cap; use a sampled ensemble");
    OracleEnsemble e;
    e.mode_ = Mode::Exhaustive;
    e.n_ = n;
    e.m_ = m;
    e.count_ = static_cast<i64>(total);
    return e;
  }

  static OracleEnsemble sampled(i64 n, i64 m, i64 count, std::uint64_t seed) {
    if (count < 1) throw ConfigError("sampled ensemble needs count >= 1");
    OracleEnsemble e;
    e.mode_ = Mode::Sampled;
    e.n_ = n;
    e.m_ = m;
    e.count_ = count;
    e.seed_ = seed;
    return e;
  }

  Mode mode() const { return mode_; }
  i64 domain_size() const { return n_; }
  i64 range_size() const { return m_; }
  i64 size() const { return count_; }
  std::uint64_t seed() const { return seed_; }

  double weight(i64) const { return 1.0 / static_cast<double>(count_); }

  OracleTable table(i64 index) const {
    std::vector<int> entries(static_cast<std::size_t>(n_));
    if (mode_ == Mode::Exhaustive) {
      // Lexicographic order of the entry arrays: entries[0] most significant.
      i64 rem = index;
      for (i64 j = n_ - 1; j >= 0; --j) {
        entries[static_cast<std::size_t>(j)] = static_cast<int>(rem % m_);
        rem /= m_;
      }
    } else {
      Rng rng(split_seed(seed_, static_cast<std::uint64_t>(index)));
      std::uniform_int_distribution<int> d(0, static_cast<int>(m_ - 1));
      for (auto& v : entries) v = d(rng);
    }
    return OracleTable(n_, m_, std::move(entries));
  }

  template <typename F>
  void for_each(F&& f) const {
    for (i64 i = 0; i < count_; ++i) f(i, table(i), weight(i));
  }

private:
  Mode mode_ = Mode::Exhaustive;
  i64 n_ = 1;
  i64 m_ = 1;
  i64 count_ = 1;
  std::uint64_t seed_ = 0;
};

inline OracleEnsemble enumerate_oracles(i64 n, i64 m, i64 cap = kDefaultEnumerationCap) {
  return OracleEnsemble::exhaustive(n, m, cap);
}

inline void to_json(json& j, const OracleEnsemble& e) {
  j = json{{"mode", e.mode() == OracleEnsemble::Mode::Exhaustive ? "exhaustive" : "sampled"},
           {"n", e.domain_size()},
           {"m", e.range_size()}};
  if (e.mode() == OracleEnsemble::Mode::Sampled) {
    j["count"] = e.size();
    j["seed"] = e.seed();
  }
}

// |x, y> -> |x, (y + H(x)) mod M> on the two designated registers.
inline Vec oracle_unitary_step(const OracleTable& h, const Vec& state,
                               const RegisterLayout& layout,
                               const std::string& x_label, const std::string& y_label,
                               bool inverse = false) {
  if (layout.subsystem_dim(x_label) != h.domain_size)
    throw DimensionMismatch("x register dimension != oracle domain");
  if (layout.subsystem_dim(y_label) != h.range_size)
    throw DimensionMismatch("y register dimension != oracle range");
  if (state.size() != layout.dim())
    throw DimensionMismatch("state dimension != layout dimension");

  const i64 y_stride = layout.stride(y_label);
  const i64 m = h.range_size;
  Vec out(state.size());
  for (i64 i = 0; i < state.size(); ++i) {
    i64 x = layout.digit(i, x_label);
    i64 y = layout.digit(i, y_label);
    i64 shift = static_cast<i64>(h.at(x));
    i64 y2 = inverse ? (y - shift % m + m) % m : (y + shift) % m;
    out[i + (y2 - y) * y_stride] = state[i];
  }
  return out;
}

}  // namespace nuqrom
