#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nuqrom/errors.hpp"
#include "nuqrom/oracle.hpp"

namespace nuqrom {

// Oracle handle that counts evaluations, so declared query budgets can be
// checked against what Samp/Verify actually do.
class CountingOracle {
public:
  explicit CountingOracle(const OracleTable& t) : table_(&t) {}

  int operator()(i64 x) const {
    ++count_;
    return table_->at(x);
  }

  // Forwarded query cost from a derived oracle view (e.g. a salt slice).
  void charge(i64 k) const { count_ += k; }

  i64 count() const { return count_; }
  const OracleTable& table() const { return *table_; }

private:
  const OracleTable* table_;
  mutable i64 count_ = 0;
};

// A single-round game G = (Samp, Verify) over integer-encoded coins,
// challenges and answers. Verify returns true on a win; the serialized
// outcome bit keeps the convention that 0 means winning.
struct GameSpec {
  std::string name;
  i64 coin_count = 0;
  i64 challenge_count = 0;
  i64 answer_count = 0;
  int t_samp = 0;
  int t_verify = 0;
  i64 oracle_domain = 0;
  i64 oracle_range = 0;
  std::function<i64(const CountingOracle&, i64)> samp;
  std::function<bool(const CountingOracle&, i64, i64)> verify;
};

struct EvalResult {
  bool win = false;
  i64 samp_queries = 0;
  i64 verify_queries = 0;
};

inline EvalResult evaluate_counted(const GameSpec& g, const OracleTable& h, i64 r, i64 ans) {
  if (r < 0 || r >= g.coin_count) throw CoinOutOfRange("coin out of range");
  if (ans < 0 || ans >= g.answer_count) throw AnswerOutOfRange("answer out of range");
  EvalResult res;
  CountingOracle o(h);
  (void)g.samp(o, r);
  res.samp_queries = o.count();
  CountingOracle o2(h);
  res.win = g.verify(o2, r, ans);
  res.verify_queries = o2.count();
  return res;
}

inline bool evaluate(const GameSpec& g, const OracleTable& h, i64 r, i64 ans) {
  return evaluate_counted(g, h, r, ans).win;
}

inline i64 sample_challenge(const GameSpec& g, const OracleTable& h, i64 r) {
  if (r < 0 || r >= g.coin_count) throw CoinOutOfRange("coin out of range");
  CountingOracle o(h);
  return g.samp(o, r);
}

// Function inversion: r = x, challenge H(x), win iff H(ans) == H(x).
inline GameSpec owf_game(i64 n, i64 m) {
  GameSpec g;
  g.name = "owf";
  g.coin_count = n;
  g.challenge_count = m;
  g.answer_count = n;
  g.t_samp = 1;
  g.t_verify = 2;
  g.oracle_domain = n;
  g.oracle_range = m;
  g.samp = [](const CountingOracle& h, i64 r) { return static_cast<i64>(h(r)); };
  g.verify = [](const CountingOracle& h, i64 r, i64 ans) { return h(ans) == h(r); };
  return g;
}

// Distinguishing H(x) from uniform y: r = (b, x, y), win iff ans == b.
// Coins are encoded as b*(N*M) + x*M + y.
inline GameSpec prg_game(i64 n, i64 m) {
  GameSpec g;
  g.name = "prg";
  g.coin_count = 2 * n * m;
  g.challenge_count = m;
  g.answer_count = 2;
  g.t_samp = 1;  // worst case over branches; the b=1 branch makes no query
  g.t_verify = 0;
  g.oracle_domain = n;
  g.oracle_range = m;
  g.samp = [n, m](const CountingOracle& h, i64 r) {
    i64 b = r / (n * m);
    i64 x = (r / m) % n;
    i64 y = r % m;
    return b == 0 ? static_cast<i64>(h(x)) : y;
  };
  g.verify = [n, m](const CountingOracle&, i64 r, i64 ans) {
    i64 b = r / (n * m);
    return ans == b;
  };
  return g;
}

// Salted wrapper: coins (s, r), challenge (s, ch), all oracle access of the
// inner game routed through the slice H(s, .).
inline GameSpec salt_game(const GameSpec& inner, i64 k) {
  if (k < 1) throw DimensionMismatch("salt space must be positive");
  GameSpec g;
  g.name = "salted:" + inner.name + ":" + std::to_string(k);
  g.coin_count = k * inner.coin_count;
  g.challenge_count = k * inner.challenge_count;
  g.answer_count = inner.answer_count;
  g.t_samp = inner.t_samp;
  g.t_verify = inner.t_verify;
  g.oracle_domain = k * inner.oracle_domain;
  g.oracle_range = inner.oracle_range;
  auto base = std::make_shared<GameSpec>(inner);
  i64 rc = inner.coin_count;
  i64 cc = inner.challenge_count;
  g.samp = [base, k, rc, cc](const CountingOracle& h, i64 r) {
    i64 s = r / rc;
    OracleTable view = salted_view(h.table(), k, s);
    CountingOracle vo(view);
    i64 ch = base->samp(vo, r % rc);
    h.charge(vo.count());
    return s * cc + ch;
  };
  g.verify = [base, k, rc](const CountingOracle& h, i64 r, i64 ans) {
    i64 s = r / rc;
    OracleTable view = salted_view(h.table(), k, s);
    CountingOracle vo(view);
    bool win = base->verify(vo, r % rc, ans);
    h.charge(vo.count());
    return win;
  };
  return g;
}

// Code over a finite alphabet; codewords are length-n tuples, also handled
// in an integer encoding with the first coordinate most significant.
struct YzCode {
  i64 n = 0;
  i64 alphabet = 0;
  std::vector<std::vector<int>> codewords;

  void validate() const {
    if (n < 1 || alphabet < 1) throw DimensionMismatch("code needs n, |Sigma| >= 1");
    for (const auto& w : codewords) {
      if (static_cast<i64>(w.size()) != n)
        throw DimensionMismatch("codeword length != n");
      for (int c : w)
        if (c < 0 || c >= alphabet) throw DimensionMismatch("codeword symbol out of range");
    }
    for (std::size_t i = 0; i < codewords.size(); ++i)
      for (std::size_t j = i + 1; j < codewords.size(); ++j)
        if (codewords[i] == codewords[j]) throw DimensionMismatch("duplicate codeword");
  }

  i64 word_space() const {
    i64 t = 1;
    for (i64 i = 0; i < n; ++i) t *= alphabet;
    return t;
  }

  i64 encode(const std::vector<int>& w) const {
    i64 v = 0;
    for (int c : w) v = v * alphabet + c;
    return v;
  }

  std::vector<int> decode(i64 v) const {
    std::vector<int> w(static_cast<std::size_t>(n));
    for (i64 i = n - 1; i >= 0; --i) {
      w[static_cast<std::size_t>(i)] = static_cast<int>(v % alphabet);
      v /= alphabet;
    }
    return w;
  }

  bool contains(const std::vector<int>& w) const {
    for (const auto& c : codewords)
      if (c == w) return true;
    return false;
  }
};

inline void to_json(json& j, const YzCode& c) {
  j = json{{"n", c.n}, {"sigma", c.alphabet}, {"codewords", c.codewords}};
}

inline void from_json(const json& j, YzCode& c) {
  c.n = j.at("n").get<i64>();
  c.alphabet = j.at("sigma").get<i64>();
  c.codewords = j.at("codewords").get<std::vector<std::vector<int>>>();
  c.validate();
}

// Inverting the code-restricted oracle concatenation: the challenge is a
// uniform y in {0,1}^n, an answer wins iff it is a codeword w with
// H(i, w_i) == y_i for all i. Oracle points (i, c) sit at index i*|Sigma| + c.
inline GameSpec yz_game(const YzCode& code) {
  code.validate();
  GameSpec g;
  auto c = std::make_shared<YzCode>(code);
  i64 n = code.n;
  i64 sigma = code.alphabet;
  g.name = "yz";
  g.coin_count = i64{1} << n;
  g.challenge_count = g.coin_count;
  g.answer_count = code.word_space();
  g.t_samp = 0;
  g.t_verify = static_cast<int>(n);
  g.oracle_domain = n * sigma;
  g.oracle_range = 2;
  g.samp = [](const CountingOracle&, i64 r) { return r; };
  g.verify = [c, n, sigma](const CountingOracle& h, i64 r, i64 ans) {
    std::vector<int> w = c->decode(ans);
    if (!c->contains(w)) return false;
    for (i64 i = 0; i < n; ++i) {
      int bit = h(i * sigma + w[static_cast<std::size_t>(i)]);
      int want = static_cast<int>((r >> (n - 1 - i)) & 1);
      if (bit != want) return false;
    }
    return true;
  };
  return g;
}

// Per-oracle tabulation of challenges and the win predicate; the basic
// building block for projectors and exact expectations.
struct CoinTable {
  std::vector<i64> challenge;        // challenge[r]
  std::vector<std::vector<char>> win;  // win[r][ans]
};

inline CoinTable make_coin_table(const GameSpec& g, const OracleTable& h) {
  CoinTable t;
  t.challenge.resize(static_cast<std::size_t>(g.coin_count));
  t.win.resize(static_cast<std::size_t>(g.coin_count));
  for (i64 r = 0; r < g.coin_count; ++r) {
    CountingOracle o(h);
    t.challenge[static_cast<std::size_t>(r)] = g.samp(o, r);
    auto& row = t.win[static_cast<std::size_t>(r)];
    row.resize(static_cast<std::size_t>(g.answer_count));
    for (i64 a = 0; a < g.answer_count; ++a) {
      CountingOracle ov(h);
      row[static_cast<std::size_t>(a)] = g.verify(ov, r, a) ? 1 : 0;
    }
  }
  return t;
}

}  // namespace nuqrom
