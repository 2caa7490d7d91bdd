#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

#include "laman/canonical.hpp"
#include "laman/lam_value.hpp"
#include "laman/laman_check.hpp"
#include "laman/memo_table.hpp"
#include "laman/multigraph.hpp"
#include "laman/packed_bigraph.hpp"
#include "laman/quotients.hpp"

namespace laman {

struct LamOptions {
  /// Bridge, untangling and duplicate-biedge shortcuts. They never change a
  /// value; switching them off runs the bare recursion.
  bool reductions = true;
  /// Memo keys also identify a bigraph with its G/H swap.
  bool swap_closure = false;
  /// Workers for the subset sweep at the top recursion node.
  unsigned threads = 1;
};

struct LamStats {
  std::uint64_t nodes = 0;       // evaluations entered
  std::uint64_t memo_hits = 0;
  std::uint64_t reductions = 0;  // nodes settled by a reduction
  std::uint64_t pairs = 0;       // (M, N) pairs that passed the pseudo-Laman filter
  double seconds = 0.0;

  LamStats& operator+=(const LamStats& o) {
    nodes += o.nodes;
    memo_hits += o.memo_hits;
    reductions += o.reductions;
    pairs += o.pairs;
    return *this;
  }
};

namespace packed {

struct BridgeInfo {
  std::vector<bool> g;
  std::vector<bool> h;
};

inline BridgeInfo bridges(const PackedBigraph& b) {
  const std::size_t m = b.size();
  const BiedgeMask all = full_mask(m);
  SmallUnionFind uf;
  const unsigned dg = rank(b.g, b.g_vertices, all, uf);
  const unsigned dh = rank(b.h, b.h_vertices, all, uf);
  BridgeInfo info{std::vector<bool>(m), std::vector<bool>(m)};
  for (std::size_t k = 0; k < m; ++k) {
    BiedgeMask rest = all & ~(BiedgeMask{1} << k);
    info.g[k] = !b.g[k].is_loop() && rank(b.g, b.g_vertices, rest, uf) < dg;
    info.h[k] = !b.h[k].is_loop() && rank(b.h, b.h_vertices, rest, uf) < dh;
  }
  return info;
}

/// Pivot policy: a biedge that is a bridge on exactly one side, else a biedge
/// that is a bridge on neither side with the largest endpoint degrees, else 0.
inline std::size_t choose_pivot(const PackedBigraph& b) {
  const std::size_t m = b.size();
  if (m == 0) return 0;
  BridgeInfo br = bridges(b);
  for (std::size_t k = 0; k < m; ++k)
    if (br.g[k] != br.h[k]) return k;
  std::array<unsigned, 256> dg{}, dh{};
  for (std::size_t k = 0; k < m; ++k) {
    ++dg[b.g[k].a], ++dg[b.g[k].b];
    ++dh[b.h[k].a], ++dh[b.h[k].b];
  }
  std::size_t best = 0;
  long best_score = -1;
  for (std::size_t k = 0; k < m; ++k) {
    if (br.g[k] || br.h[k]) continue;
    long score = dg[b.g[k].a] + dg[b.g[k].b] + dh[b.h[k].a] + dh[b.h[k].b];
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

/// Finds a biedge through which b untangles into two bigraphs on disjoint
/// biedge sets E1 and E2. Returns {E1, E2} as masks.
inline std::optional<std::pair<BiedgeMask, BiedgeMask>> find_untangling(const PackedBigraph& b,
                                                                        const BridgeInfo& br) {
  const std::size_t m = b.size();
  SmallUnionFind ug, uh;
  const BiedgeMask all = full_mask(m);
  rank(b.g, b.g_vertices, all, ug);
  rank(b.h, b.h_vertices, all, uh);
  std::vector<unsigned> cg(m), ch(m);
  for (std::size_t k = 0; k < m; ++k) {
    cg[k] = ug.find(b.g[k].a);
    ch[k] = uh.find(b.h[k].a);
  }
  auto same_component = [&](const std::vector<unsigned>& comp, unsigned c) {
    BiedgeMask out = 0;
    for (std::size_t k = 0; k < m; ++k)
      if (comp[k] == c) out |= BiedgeMask{1} << k;
    return out;
  };
  for (std::size_t p = 0; p < m; ++p) {
    if (br.g[p] || br.h[p]) continue;
    const BiedgeMask pbit = BiedgeMask{1} << p;
    const BiedgeMask forbidden = same_component(ch, ch[p]);  // H2' side
    BiedgeMask e1 = same_component(cg, cg[p]) & ~pbit;
    BiedgeMask frontier = e1;
    bool ok = true;
    while (frontier && ok) {
      BiedgeMask grown = e1;
      for (BiedgeMask s = frontier; s; s &= s - 1) {
        auto k = static_cast<std::size_t>(std::countr_zero(s));
        grown |= same_component(ch, ch[k]);
        grown |= same_component(cg, cg[k]) & ~pbit;
      }
      if (grown & forbidden) ok = false;
      frontier = grown & ~e1;
      e1 = grown;
    }
    if (!ok) continue;
    BiedgeMask e2 = all & ~e1 & ~pbit;
    if (e1 && e2) return std::make_pair(e1, e2);
  }
  return std::nullopt;
}

inline bool has_duplicate_biedge(const PackedBigraph& b) {
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j)
      if (b.g[i] == b.g[j] && b.h[i] == b.h[j]) return true;
  return false;
}

} // namespace packed

/// Evaluates Laman numbers of bigraphs by the recursion
///   Lam(B) = Lam(^{e}B) + Lam(B^{e}) + sum over (M, N) of Lam(^M B) * Lam(B^N)
/// with base cases for self-loops and the single biedge, memoised on canonical keys.
class LamanEngine {
public:
  explicit LamanEngine(MemoTable& memo, LamOptions opts = {}) : memo_(memo), opts_(opts) {
    if (opts_.threads == 0) opts_.threads = 1;
  }

  /// Laman number of b; `pivot` forces the biedge used at the top node.
  LamValue lam(const Bigraph& b, std::optional<EdgeId> pivot = std::nullopt) {
    PackedBigraph p = pack(b);
    std::optional<std::size_t> index;
    if (pivot) {
      auto ids = b.biedges();
      auto it = std::find(ids.begin(), ids.end(), *pivot);
      if (it == ids.end()) throw InputError("pivot is not a biedge: " + std::to_string(*pivot));
      index = static_cast<std::size_t>(it - ids.begin());
    }
    return lam(p, index);
  }

  LamValue lam(const PackedBigraph& b, std::optional<std::size_t> pivot = std::nullopt) {
    if (pivot && *pivot >= b.size()) throw InputError("pivot index out of range");
    auto start = std::chrono::steady_clock::now();
    LamValue v = eval(packed::strip_isolated(b), pivot ? static_cast<int>(*pivot) : -1, true);
    stats_.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return v;
  }

  const LamStats& stats() const { return stats_; }
  const LamOptions& options() const { return opts_; }

private:
  LamValue eval(const PackedBigraph& b, int forced = -1, bool top = false) {
    ++stats_.nodes;
    if (packed::has_loop(b.g) || packed::has_loop(b.h)) return LamValue(0);
    const std::size_t m = b.size();
    const unsigned dg = packed::dimension(b.g, b.g_vertices);
    const unsigned dh = packed::dimension(b.h, b.h_vertices);
    if (dg + dh != m + 1) return LamValue(0);
    if (m == 1) return LamValue(1);

    CanonicalKey key = canonical_key(b, opts_.swap_closure);
    if (forced < 0) {
      if (auto hit = memo_.find(key)) {
        ++stats_.memo_hits;
        return *hit;
      }
    }
    std::optional<LamValue> value;
    if (opts_.reductions && forced < 0) value = reduce(b);
    if (value) {
      ++stats_.reductions;
    } else {
      std::size_t pivot = forced >= 0 ? static_cast<std::size_t>(forced) : packed::choose_pivot(b);
      value = formula(b, pivot, top);
    }
    memo_.insert(key, *value);
    return *value;
  }

  std::optional<LamValue> reduce(const PackedBigraph& b) {
    if (packed::has_duplicate_biedge(b)) return LamValue(0);
    const std::size_t m = b.size();
    packed::BridgeInfo br = packed::bridges(b);
    for (std::size_t k = 0; k < m; ++k)
      if (br.g[k] && br.h[k]) return LamValue(0);
    for (std::size_t k = 0; k < m; ++k)
      if (br.g[k] != br.h[k])
        return eval(packed::restrict_to(b, full_mask(m) & ~(BiedgeMask{1} << k)));
    if (auto split = packed::find_untangling(b, br)) {
      LamValue first = eval(packed::restrict_to(b, split->first));
      if (first.is_zero()) return first;
      return first * eval(packed::restrict_to(b, split->second));
    }
    return std::nullopt;
  }

  LamValue formula(const PackedBigraph& input, std::size_t pivot, bool top) {
    // With the pivot last, the non-pivot biedges are exactly the low m-1 bits.
    PackedBigraph b = pivot + 1 == input.size() ? input : packed::move_to_back(input, pivot);
    const std::size_t m = b.size();
    const BiedgeMask p = BiedgeMask{1} << (m - 1);
    LamValue total = eval(packed::left_quot(b, p)) + eval(packed::right_quot(b, p));
    const BiedgeMask others = p - 1;
    const BiedgeMask last = others - 1;  // S ranges over 1..others-1

    if (!top || opts_.threads <= 1 || last < 2 * opts_.threads) return total + sweep(b, 1, last, 1);

    std::vector<LamValue> partial(opts_.threads);
    std::vector<LamStats> worker_stats(opts_.threads);
    std::vector<std::exception_ptr> errors(opts_.threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < opts_.threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          LamOptions sub = opts_;
          sub.threads = 1;
          LamanEngine worker(memo_, sub);
          partial[t] = worker.sweep(b, 1 + t, last, opts_.threads);
          worker_stats[t] = worker.stats_;
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (unsigned t = 0; t < opts_.threads; ++t) {
      total += partial[t];
      stats_ += worker_stats[t];
    }
    return total;
  }

  // Sum of Lam(^M B) * Lam(B^N) over S = first, first+step, ... <= last, where
  // M = S + pivot and N = complement(S) + pivot; the pivot is the last biedge.
  LamValue sweep(const PackedBigraph& b, BiedgeMask first, BiedgeMask last, BiedgeMask step) {
    const std::size_t m = b.size();
    const BiedgeMask p = BiedgeMask{1} << (m - 1);
    const BiedgeMask others = p - 1;
    const unsigned dg = packed::dimension(b.g, b.g_vertices);
    const unsigned dh = packed::dimension(b.h, b.h_vertices);
    packed::SmallUnionFind uf;
    LamValue total;
    for (BiedgeMask s = first; s <= last; s += step) {
      const BiedgeMask mm = s | p;
      const BiedgeMask nn = (others & ~s) | p;
      const int msize = std::popcount(mm), nsize = std::popcount(nn);
      // ^M B = (G/M, H\M): no loop in G/M, dim(G) - rk_G(M) + rk_H(E\M) = |E\M| + 1
      int rgm = packed::contract_rank(b.g, b.g_vertices, mm, uf);
      if (rgm < 0) continue;
      unsigned rh_rest = packed::rank(b.h, b.h_vertices, others & ~s, uf);
      if (static_cast<int>(dg) - rgm + static_cast<int>(rh_rest) != static_cast<int>(m) - msize + 1) continue;
      // B^N = (G\N, H/N): no loop in H/N, rk_G(E\N) + dim(H) - rk_H(N) = |E\N| + 1
      int rhn = packed::contract_rank(b.h, b.h_vertices, nn, uf);
      if (rhn < 0) continue;
      unsigned rg_rest = packed::rank(b.g, b.g_vertices, s, uf);
      if (static_cast<int>(rg_rest) + static_cast<int>(dh) - rhn != static_cast<int>(m) - nsize + 1) continue;
      ++stats_.pairs;
      LamValue left = eval(packed::left_quot(b, mm));
      if (left.is_zero()) continue;
      total += left * eval(packed::right_quot(b, nn));
    }
    return total;
  }

  MemoTable& memo_;
  LamOptions opts_;
  LamStats stats_;
};

struct LamResult {
  LamValue value;
  LamStats stats;
};

inline LamResult compute_lam(const Bigraph& b, MemoTable& memo, const LamOptions& opts = {},
                             std::optional<EdgeId> pivot = std::nullopt) {
  LamanEngine engine(memo, opts);
  LamValue v = engine.lam(b, pivot);
  return {v, engine.stats()};
}

inline LamValue lam(const Bigraph& b, MemoTable& memo, const LamOptions& opts = {}) {
  return compute_lam(b, memo, opts).value;
}

inline LamValue lam(const Bigraph& b) {
  MemoTable memo;
  return lam(b, memo);
}

/// Laman number of a Laman graph G, i.e. Lam((G, G)).
inline LamResult compute_lam_graph(const MultiGraph& g, MemoTable& memo, const LamOptions& opts = {},
                                   std::optional<EdgeId> pivot = std::nullopt) {
  LamanReport report = check_laman(g);
  if (!report) throw InputError("not a Laman graph: condition \"" + report.violated + "\" violated");
  return compute_lam(duplicate(g), memo, opts, pivot);
}

inline LamValue lam_graph(const MultiGraph& g, const LamOptions& opts = {}) {
  MemoTable memo;
  return compute_lam_graph(g, memo, opts).value;
}

inline EdgeId choose_pivot(const Bigraph& b) {
  if (b.biedge_count() == 0) throw InputError("bigraph has no biedges");
  return b.biedges()[packed::choose_pivot(pack(b))];
}

} // namespace laman
