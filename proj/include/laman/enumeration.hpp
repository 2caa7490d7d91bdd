#pragma once

#include <algorithm>
#include <chrono>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "laman/canonical.hpp"
#include "laman/laman_number.hpp"
#include "laman/multigraph.hpp"

namespace laman {

struct EnumerationOptions {
  std::size_t cap = 10;  // largest n accepted unless force is set
  bool force = false;
  unsigned threads = 1;
};

/// All Laman graphs on n vertices up to isomorphism, each in canonical form
/// (vertices 0..n-1), ordered by canonical key.
struct Catalog {
  std::size_t n = 0;
  std::vector<MultiGraph> graphs;
  std::size_t count() const { return graphs.size(); }
};

namespace detail {

inline MultiGraph decode_canonical(const std::string& bytes) {
  MultiGraph g;
  const auto n = static_cast<unsigned char>(bytes[0]);
  for (VertexId v = 0; v < n; ++v) g.add_vertex(v);
  for (std::size_t i = 1; i + 1 < bytes.size(); i += 2)
    g.add_edge(static_cast<unsigned char>(bytes[i]), static_cast<unsigned char>(bytes[i + 1]));
  return g;
}

// Canonical keys of every one-vertex Henneberg extension of `parent`.
inline void expand(const MultiGraph& parent, std::unordered_set<std::string>& out) {
  const VertexId t = static_cast<VertexId>(parent.vertex_count());
  const auto n = static_cast<VertexId>(parent.vertex_count());
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v) {
      MultiGraph child = parent;
      child.add_edge(u, t);
      child.add_edge(v, t);
      out.insert(canonical_form(child).bytes);
    }
  for (const auto& [id, ep] : parent.edges())
    for (VertexId w = 0; w < n; ++w) {
      if (ep.contains(w)) continue;
      MultiGraph child = delete_edges(parent, {id});
      for (VertexId v = 0; v < n; ++v) child.add_vertex(v);
      child.add_edge(ep.first, t);
      child.add_edge(ep.second, t);
      child.add_edge(w, t);
      out.insert(canonical_form(child).bytes);
    }
}

inline std::vector<std::string> next_level(const std::vector<std::string>& parents, unsigned threads) {
  std::unordered_set<std::string> merged;
  if (threads <= 1 || parents.size() < 2 * threads) {
    for (const auto& p : parents) expand(decode_canonical(p), merged);
  } else {
    std::vector<std::unordered_set<std::string>> local(threads);
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < parents.size(); i += threads) expand(decode_canonical(parents[i]), local[t]);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (auto& s : local) merged.insert(s.begin(), s.end());
  }
  std::vector<std::string> level(merged.begin(), merged.end());
  std::sort(level.begin(), level.end());
  return level;
}

inline void check_range(std::size_t n, const EnumerationOptions& opts) {
  if (n < 2) throw InputError("enumeration needs n >= 2");
  if (n > opts.cap && !opts.force)
    throw InputError("n = " + std::to_string(n) + " exceeds the enumeration cap " + std::to_string(opts.cap) +
                     " (use force to override)");
  if (n > 255) throw InputError("n too large");
}

} // namespace detail

/// Streams the Laman graphs on n vertices (canonical form, sorted by key) into
/// `sink` and returns how many there are. Levels are built breadth-first by
/// applying both Henneberg rules in every possible way and discarding
/// isomorphic duplicates.
inline std::size_t enumerate_laman(std::size_t n, const std::function<void(const MultiGraph&)>& sink,
                                   const EnumerationOptions& opts = {}) {
  detail::check_range(n, opts);
  MultiGraph edge;
  edge.add_edge(0, 1);
  std::vector<std::string> level{canonical_form(edge).bytes};
  for (std::size_t k = 3; k <= n; ++k) level = detail::next_level(level, opts.threads);
  for (const auto& bytes : level) sink(detail::decode_canonical(bytes));
  return level.size();
}

inline Catalog enumerate_catalog(std::size_t n, const EnumerationOptions& opts = {}) {
  Catalog c;
  c.n = n;
  enumerate_laman(n, [&](const MultiGraph& g) { c.graphs.push_back(g); }, opts);
  return c;
}

struct ExtremalResult {
  std::size_t n = 0;
  std::size_t graphs = 0;
  LamValue min;
  LamValue max;
  MultiGraph argmin;  // first catalog graph attaining the minimum
  MultiGraph argmax;  // first catalog graph attaining the maximum
  LamStats stats;
};

/// Laman numbers of every Laman graph on n vertices; reports the extremes and
/// witnesses. One memo table is shared across the whole catalog.
inline ExtremalResult extremal_laman(std::size_t n, const EnumerationOptions& opts = {},
                                     const LamOptions& lam_opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  Catalog catalog = enumerate_catalog(n, opts);
  MemoTable memo;
  std::vector<LamValue> values(catalog.count());
  std::vector<LamStats> stats(std::max(1u, opts.threads));
  LamOptions inner = lam_opts;
  inner.threads = 1;
  auto work = [&](unsigned t, unsigned stride) {
    LamanEngine engine(memo, inner);
    for (std::size_t i = t; i < catalog.count(); i += stride) values[i] = engine.lam(duplicate(catalog.graphs[i]));
    stats[t] = engine.stats();
  };
  if (opts.threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::exception_ptr> errors(opts.threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < opts.threads; ++t)
      pool.emplace_back([&, t] {
        try {
          work(t, opts.threads);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  ExtremalResult r;
  r.n = n;
  r.graphs = catalog.count();
  for (const auto& s : stats) r.stats += s;
  r.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == 0 || values[i] < r.min) {
      r.min = values[i];
      r.argmin = catalog.graphs[i];
    }
    if (i == 0 || values[i] > r.max) {
      r.max = values[i];
      r.argmax = catalog.graphs[i];
    }
  }
  return r;
}

} // namespace laman
