#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "laman/lam_value.hpp"
#include "laman/multigraph.hpp"

namespace laman::oracle {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;

/// One polynomial equation over the pair coordinates.
struct Equation {
  enum class Kind {
    Normalize,  // z[a] - 1
    Product,    // z[a] * z[b] - lambda
    Linear,     // sum of coeff * z[var]
  };
  Kind kind = Kind::Linear;
  int a = -1;
  int b = -1;
  Complex lambda;
  std::vector<std::pair<int, double>> terms;
};

/// Spanning forest of one side: BFS from the least vertex of each component.
struct Forest {
  std::map<VertexId, VertexId> parent;  // roots map to themselves
  std::map<VertexId, int> depth;

  bool is_root(VertexId v) const { return parent.at(v) == v; }

  /// Vertex sequence u = p0, ..., pk = v along the forest (same component).
  std::vector<VertexId> path(VertexId u, VertexId v) const {
    std::vector<VertexId> up, down;
    while (depth.at(u) > depth.at(v)) up.push_back(std::exchange(u, parent.at(u)));
    while (depth.at(v) > depth.at(u)) down.push_back(std::exchange(v, parent.at(v)));
    while (u != v) {
      up.push_back(std::exchange(u, parent.at(u)));
      down.push_back(std::exchange(v, parent.at(v)));
    }
    up.push_back(u);
    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
  }
};

inline Forest spanning_forest(const MultiGraph& g) {
  Forest f;
  for (VertexId root : g.vertices()) {
    if (f.parent.count(root)) continue;
    f.parent[root] = root;
    f.depth[root] = 0;
    std::queue<VertexId> q;
    q.push(root);
    while (!q.empty()) {
      VertexId x = q.front();
      q.pop();
      for (VertexId y : g.neighbors(x))
        if (!f.parent.count(y)) {
          f.parent[y] = x;
          f.depth[y] = f.depth[x] + 1;
          q.push(y);
        }
    }
  }
  return f;
}

/// Square system whose solutions are the points of Z^B: coordinates x_uv for
/// ordered pairs (u, v) of adjacent G-vertices and y_tw for H, the pivot
/// normalisations, one product equation per other biedge, antisymmetry, and one
/// forest-path relation per non-forest pair. Vertex order is vertex id order.
struct RealizationSystem {
  Bigraph bigraph;
  EdgeId pivot = 0;
  std::vector<std::pair<VertexId, VertexId>> x_pairs;  // P
  std::vector<std::pair<VertexId, VertexId>> y_pairs;  // Q, variables offset by |P|
  std::map<std::pair<VertexId, VertexId>, int> x_index, y_index;
  std::map<EdgeId, Complex> lambda;
  Forest g_forest, h_forest;
  std::vector<Equation> equations;

  // Potential coordinates: x_uv = p_u - p_v with p = 0 on forest roots.
  std::vector<VertexId> g_free, h_free;  // non-root vertices, in id order
  std::map<VertexId, int> g_slot, h_slot;

  std::size_t variable_count() const { return x_pairs.size() + y_pairs.size(); }
  std::size_t equation_count() const { return equations.size(); }
  std::size_t reduced_size() const { return g_free.size() + h_free.size(); }
};

namespace detail {

inline void add_pairs(const MultiGraph& side, std::vector<std::pair<VertexId, VertexId>>& pairs,
                      std::map<std::pair<VertexId, VertexId>, int>& index, int offset) {
  for (const auto& [id, ep] : side.edges()) {
    for (auto pr : {std::pair{ep.first, ep.second}, std::pair{ep.second, ep.first}}) {
      if (index.count(pr)) continue;
      index[pr] = offset + static_cast<int>(pairs.size());
      pairs.push_back(pr);
    }
  }
}

inline void add_linear_relations(const MultiGraph& side, const Forest& f,
                                 const std::map<std::pair<VertexId, VertexId>, int>& index,
                                 std::vector<Equation>& eqs) {
  std::set<std::pair<VertexId, VertexId>> done;
  for (const auto& [pr, var] : index) {
    auto [u, v] = pr;
    if (u > v || done.count(pr)) continue;
    done.insert(pr);
    Equation anti;
    anti.terms = {{var, 1.0}, {index.at({v, u}), 1.0}};
    eqs.push_back(anti);
    bool forest_edge = f.parent.at(v) == u || f.parent.at(u) == v;
    if (forest_edge) continue;
    Equation cyc;
    cyc.terms.push_back({var, 1.0});
    auto path = f.path(u, v);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) cyc.terms.push_back({index.at({path[i], path[i + 1]}), -1.0});
    eqs.push_back(cyc);
  }
  (void)side;
}

} // namespace detail

/// Draws the labels lambda_e = r * exp(i theta), theta uniform, r uniform in [0.5, 2].
inline std::map<EdgeId, Complex> random_labels(const Bigraph& b, EdgeId pivot, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> radius(0.5, 2.0);
  std::map<EdgeId, Complex> out;
  for (EdgeId e : b.biedges()) {
    double th = angle(rng), r = radius(rng);
    out[e] = e == pivot ? Complex(1.0) : std::polar(r, th);
  }
  return out;
}

inline RealizationSystem build_system(const Bigraph& b, EdgeId pivot, std::uint64_t seed) {
  if (!b.has_biedge(pivot)) throw InputError("pivot is not a biedge: " + std::to_string(pivot));
  if (has_self_loop(b.g()) || has_self_loop(b.h())) throw InputError("realization system needs a loop-free bigraph");
  if (!is_pseudo_laman(b)) throw InputError("realization system needs a pseudo-Laman bigraph");
  RealizationSystem sys;
  sys.bigraph = b;
  sys.pivot = pivot;
  detail::add_pairs(b.g(), sys.x_pairs, sys.x_index, 0);
  detail::add_pairs(b.h(), sys.y_pairs, sys.y_index, 0);
  const int yoff = static_cast<int>(sys.x_pairs.size());
  for (auto& kv : sys.y_index) kv.second += yoff;
  sys.lambda = random_labels(b, pivot, seed);
  sys.g_forest = spanning_forest(b.g());
  sys.h_forest = spanning_forest(b.h());

  const Endpoints& pg = b.g().endpoints(pivot);
  const Endpoints& ph = b.h().endpoints(pivot);
  Equation nx, ny;
  nx.kind = ny.kind = Equation::Kind::Normalize;
  nx.a = sys.x_index.at({pg.first, pg.second});
  ny.a = sys.y_index.at({ph.first, ph.second});
  sys.equations.push_back(nx);
  sys.equations.push_back(ny);
  for (EdgeId e : b.biedges()) {
    if (e == pivot) continue;
    const Endpoints& eg = b.g().endpoints(e);
    const Endpoints& eh = b.h().endpoints(e);
    Equation prod;
    prod.kind = Equation::Kind::Product;
    prod.a = sys.x_index.at({eg.first, eg.second});
    prod.b = sys.y_index.at({eh.first, eh.second});
    prod.lambda = sys.lambda.at(e);
    sys.equations.push_back(prod);
  }
  detail::add_linear_relations(b.g(), sys.g_forest, sys.x_index, sys.equations);
  detail::add_linear_relations(b.h(), sys.h_forest, sys.y_index, sys.equations);

  for (VertexId v : b.g().vertices())
    if (!sys.g_forest.is_root(v)) {
      sys.g_slot[v] = static_cast<int>(sys.g_free.size());
      sys.g_free.push_back(v);
    }
  for (VertexId v : b.h().vertices())
    if (!sys.h_forest.is_root(v)) {
      sys.h_slot[v] = static_cast<int>(sys.g_free.size() + sys.h_free.size());
      sys.h_free.push_back(v);
    }
  if (sys.equation_count() != sys.variable_count())
    throw InternalError("realization system is not square");
  return sys;
}

/// Residuals of every equation of the square system at z.
inline Vector residuals(const RealizationSystem& sys, const Vector& z) {
  Vector r(static_cast<Eigen::Index>(sys.equations.size()));
  for (std::size_t i = 0; i < sys.equations.size(); ++i) {
    const Equation& eq = sys.equations[i];
    Complex v;
    switch (eq.kind) {
      case Equation::Kind::Normalize: v = z[eq.a] - 1.0; break;
      case Equation::Kind::Product: v = z[eq.a] * z[eq.b] - eq.lambda; break;
      case Equation::Kind::Linear:
        for (auto [var, c] : eq.terms) v += c * z[var];
        break;
    }
    r[static_cast<Eigen::Index>(i)] = v;
  }
  return r;
}

/// Pair coordinates of the point with vertex potentials `w` (reduced coordinates).
inline Vector lift(const RealizationSystem& sys, const Vector& w) {
  auto pot = [&](const std::map<VertexId, int>& slot, VertexId v) {
    auto it = slot.find(v);
    return it == slot.end() ? Complex(0.0) : w[it->second];
  };
  Vector z(static_cast<Eigen::Index>(sys.variable_count()));
  for (const auto& [pr, i] : sys.x_index) z[i] = pot(sys.g_slot, pr.first) - pot(sys.g_slot, pr.second);
  for (const auto& [pr, i] : sys.y_index) z[i] = pot(sys.h_slot, pr.first) - pot(sys.h_slot, pr.second);
  return z;
}

namespace detail {

// The square system restricted to the potential coordinates: the linear
// relations hold identically there, leaving the normalisations and products.
struct ReducedSystem {
  struct Term {
    int gu, gv, ht, hw;  // potential slots, -1 for a root
    Complex lambda;
    bool normalize_g = false, normalize_h = false;
  };
  std::vector<Term> rows;
  int size = 0;

  explicit ReducedSystem(const RealizationSystem& sys) {
    size = static_cast<int>(sys.reduced_size());
    auto slot = [](const std::map<VertexId, int>& s, VertexId v) {
      auto it = s.find(v);
      return it == s.end() ? -1 : it->second;
    };
    const Bigraph& b = sys.bigraph;
    const Endpoints& pg = b.g().endpoints(sys.pivot);
    const Endpoints& ph = b.h().endpoints(sys.pivot);
    Term ng{slot(sys.g_slot, pg.first), slot(sys.g_slot, pg.second), -1, -1, {}, true, false};
    Term nh{-1, -1, slot(sys.h_slot, ph.first), slot(sys.h_slot, ph.second), {}, false, true};
    rows.push_back(ng);
    rows.push_back(nh);
    for (EdgeId e : b.biedges()) {
      if (e == sys.pivot) continue;
      const Endpoints& eg = b.g().endpoints(e);
      const Endpoints& eh = b.h().endpoints(e);
      rows.push_back({slot(sys.g_slot, eg.first), slot(sys.g_slot, eg.second), slot(sys.h_slot, eh.first),
                      slot(sys.h_slot, eh.second), sys.lambda.at(e)});
    }
  }

  static Complex diff(const Vector& w, int a, int b) {
    return (a >= 0 ? w[a] : Complex(0.0)) - (b >= 0 ? w[b] : Complex(0.0));
  }

  Vector eval(const Vector& w) const {
    Vector f(size);
    for (int i = 0; i < size; ++i) {
      const Term& t = rows[static_cast<std::size_t>(i)];
      if (t.normalize_g) f[i] = diff(w, t.gu, t.gv) - 1.0;
      else if (t.normalize_h) f[i] = diff(w, t.ht, t.hw) - 1.0;
      else f[i] = diff(w, t.gu, t.gv) * diff(w, t.ht, t.hw) - t.lambda;
    }
    return f;
  }

  Eigen::MatrixXcd jacobian(const Vector& w) const {
    Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(size, size);
    auto add = [&](int row, int col, Complex v) {
      if (col >= 0) j(row, col) += v;
    };
    for (int i = 0; i < size; ++i) {
      const Term& t = rows[static_cast<std::size_t>(i)];
      if (t.normalize_g) {
        add(i, t.gu, 1.0), add(i, t.gv, -1.0);
      } else if (t.normalize_h) {
        add(i, t.ht, 1.0), add(i, t.hw, -1.0);
      } else {
        Complex dx = diff(w, t.gu, t.gv), dy = diff(w, t.ht, t.hw);
        add(i, t.gu, dy), add(i, t.gv, -dy);
        add(i, t.ht, dx), add(i, t.hw, -dx);
      }
    }
    return j;
  }
};

} // namespace detail

struct SolverSettings {
  double tol = 1e-10;
  double cluster_tol = 1e-6;
  int max_iterations = 100;
  int max_halvings = 30;
  unsigned threads = 1;
};

struct SolutionSet {
  std::vector<Vector> points;  // pair coordinates, one per cluster
  std::size_t count = 0;
  double residual = 0.0;       // max square-system residual over accepted points
  std::size_t converged = 0;   // starts that reached tol
  std::size_t starts = 0;
  bool all_discarded = false;
};

namespace detail {

inline double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Damped Newton from one start; returns the converged potentials, if any.
inline Vector polish(const ReducedSystem& rs, Vector w, double fn) {
  for (int k = 0; k < 3; ++k) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(rs.jacobian(w));
    Vector trial = w - lu.solve(rs.eval(w));
    double tn = inf_norm(rs.eval(trial));
    if (!trial.allFinite() || !(tn < fn)) break;
    w = std::move(trial);
    fn = tn;
  }
  return w;
}

inline std::optional<Vector> newton(const ReducedSystem& rs, Vector w, const SolverSettings& s) {
  Vector f = rs.eval(w);
  double fn = inf_norm(f);
  for (int it = 0; it < s.max_iterations; ++it) {
    if (fn < s.tol) return polish(rs, std::move(w), fn);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(rs.jacobian(w));
    Vector step = lu.solve(-f);
    if (!step.allFinite()) return std::nullopt;
    double t = 1.0;
    Vector trial = w + step;
    Vector ft = rs.eval(trial);
    int halvings = 0;
    while (!(inf_norm(ft) < fn) && halvings < s.max_halvings) {
      t *= 0.5;
      ++halvings;
      trial = w + t * step;
      ft = rs.eval(trial);
    }
    if (!(inf_norm(ft) < fn)) return std::nullopt;
    w = std::move(trial);
    f = std::move(ft);
    fn = inf_norm(f);
  }
  if (fn < s.tol) return polish(rs, std::move(w), fn);
  return std::nullopt;
}

inline Vector random_start(int size, std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector w(size);
  for (int i = 0; i < size; ++i) w[i] = Complex(normal(rng), normal(rng));
  return w;
}

inline bool same_point(const Vector& a, const Vector& b, double cluster_tol) {
  double scale = std::max(1.0, std::max(inf_norm(a), inf_norm(b)));
  return inf_norm(a - b) <= cluster_tol * scale;
}

} // namespace detail

/// Runs starts [first, last) of the multi-start Newton solve and merges the
/// converged points into `out`. Start k is seeded by (seed, k), so results do
/// not depend on the thread count.
inline void run_starts(const RealizationSystem& sys, std::uint64_t first, std::uint64_t last,
                       std::uint64_t seed, const SolverSettings& s, SolutionSet& out) {
  detail::ReducedSystem rs(sys);
  const unsigned threads = std::max(1u, s.threads);
  std::vector<std::optional<Vector>> found(last > first ? last - first : 0);
  auto work = [&](unsigned t) {
    for (std::uint64_t k = first + t; k < last; k += threads)
      found[k - first] = detail::newton(rs, detail::random_start(rs.size, seed, k), s);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (auto& w : found) {
    ++out.starts;
    if (!w) continue;
    Vector z = lift(sys, *w);
    double res = detail::inf_norm(residuals(sys, z));
    if (!(res < s.tol)) continue;
    ++out.converged;
    bool known = std::any_of(out.points.begin(), out.points.end(),
                             [&](const Vector& p) { return detail::same_point(p, z, s.cluster_tol); });
    out.residual = std::max(out.residual, res);
    if (!known) out.points.push_back(std::move(z));
  }
  out.count = out.points.size();
  out.all_discarded = out.converged == 0;
}

/// Counts the points of Z^B by damped Newton from `restarts` random starts,
/// clustering converged points within cluster_tol. Never exceeds the true count
/// when the tolerances are sound; reaching it is probabilistic.
inline SolutionSet count_solutions(const RealizationSystem& sys, std::uint64_t restarts, std::uint64_t seed,
                                   const SolverSettings& s = {}) {
  if (restarts < 1) throw InputError("restarts must be >= 1");
  SolutionSet out;
  run_starts(sys, 0, restarts, seed, s, out);
  return out;
}

enum class VerifyStatus { Agree, Undercount, Overcount };

inline std::string to_string(VerifyStatus s) {
  switch (s) {
    case VerifyStatus::Agree: return "agree";
    case VerifyStatus::Undercount: return "undercount";
    case VerifyStatus::Overcount: return "overcount";
  }
  return "unknown";
}

struct VerifyReport {
  std::uint64_t expected = 0;
  std::uint64_t counted = 0;  // largest count over the seeds
  VerifyStatus status = VerifyStatus::Undercount;
  std::vector<std::uint64_t> seeds;
  std::vector<std::uint64_t> counts;  // per seed
  std::vector<std::uint64_t> starts;  // per seed
  double residual = 0.0;
};

struct VerifySettings {
  std::uint64_t budget = 20000;          // restarts per seed, at most
  std::uint64_t initial_restarts = 100;  // doubled until agreement or budget
  std::vector<std::uint64_t> seeds{1, 2};
  std::optional<EdgeId> pivot;           // normalising biedge; default least id
  SolverSettings solver;
};

/// Compares `expected` with the numerical count on at least two random labelings.
/// A count above `expected` on any seed is an overcount; a shortfall that
/// persists through the whole budget is an undercount (inconclusive).
inline VerifyReport verify(const Bigraph& b, LamValue expected, const VerifySettings& vs = {}) {
  VerifyReport rep;
  rep.expected = expected.value();
  rep.seeds = vs.seeds;
  if (rep.seeds.size() < 2) throw InputError("verify needs at least two seeds");
  const bool degenerate = b.biedge_count() == 0 || has_self_loop(b.g()) || has_self_loop(b.h()) ||
                          !is_pseudo_laman(b);
  for (std::uint64_t seed : rep.seeds) {
    if (degenerate) {
      rep.counts.push_back(0);
      rep.starts.push_back(0);
      continue;
    }
    EdgeId pivot = vs.pivot ? *vs.pivot : b.biedges().front();
    RealizationSystem sys = build_system(b, pivot, seed);
    SolutionSet sol;
    std::uint64_t done = 0;
    std::uint64_t target = std::min<std::uint64_t>(std::max<std::uint64_t>(1, vs.initial_restarts), vs.budget);
    for (;;) {
      run_starts(sys, done, target, seed, vs.solver, sol);
      done = target;
      if (sol.count >= rep.expected || done >= vs.budget) break;
      target = std::min(vs.budget, target * 2);
    }
    rep.counts.push_back(sol.count);
    rep.starts.push_back(done);
    rep.residual = std::max(rep.residual, sol.residual);
  }
  rep.counted = *std::max_element(rep.counts.begin(), rep.counts.end());
  bool all_equal = std::all_of(rep.counts.begin(), rep.counts.end(),
                               [&](std::uint64_t c) { return c == rep.expected; });
  if (rep.counted > rep.expected) rep.status = VerifyStatus::Overcount;
  else if (all_equal) rep.status = VerifyStatus::Agree;
  else rep.status = VerifyStatus::Undercount;
  return rep;
}

} // namespace laman::oracle
