#include "curv/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "curv/kernels.hpp"

namespace curv {

namespace {

/// Dense transportation simplex on the complete bipartite graph. Sources are
/// nodes [0, n0), sinks [n0, n0+n1); the basis is a spanning tree.
class TransportSimplex {
 public:
  TransportSimplex(std::vector<double> supply, std::vector<double> demand,
                   const std::vector<double>& cost)
      : n0_(static_cast<std::int32_t>(supply.size())),
        n1_(static_cast<std::int32_t>(demand.size())),
        cost_(cost),
        supply_(std::move(supply)),
        demand_(std::move(demand)) {
    const std::int32_t n = n0_ + n1_;
    parent_.assign(n, -1);
    parent_edge_.assign(n, -1);
    depth_.assign(n, 0);
    pot_.assign(n, 0.0);
    node_edges_.assign(n, {});
    double scale = 0.0;
    for (double c : cost_) scale = std::max(scale, std::abs(c));
    eps_ = scale > 0.0 ? 1e-12 * scale : 1e-300;
  }

  void run() {
    build_initial_basis();
    refresh_tree();
    const std::int64_t arc_count = static_cast<std::int64_t>(n0_) * n1_;
    const std::int64_t block =
        std::max<std::int64_t>(64, static_cast<std::int64_t>(std::sqrt(static_cast<double>(arc_count))));
    const std::int64_t bland_after = 60LL * (n0_ + n1_);
    const std::int64_t hard_cap = 2000LL * (n0_ + n1_) + 1000;
    std::int64_t cursor = 0;
    std::int64_t pivots = 0;
    bool bland = false;
    while (true) {
      const std::int64_t entering = bland ? find_entering_bland(cursor) : find_entering_block(cursor, block);
      if (entering < 0) break;
      pivot(entering);
      if (++pivots > bland_after) bland = true;
      if (pivots > hard_cap)
        throw Error("solve_w2: simplex failed to converge (pivot cap reached)");
    }
  }

  struct BasicArc {
    std::int32_t i, j;
    double flow;
  };

  std::vector<BasicArc> basic_arcs() const {
    std::vector<BasicArc> out;
    out.reserve(edges_.size());
    for (const Edge& e : edges_) out.push_back({e.i, e.j, e.flow});
    return out;
  }

 private:
  struct Edge {
    std::int32_t i, j;  // source index, sink index
    double flow;
  };

  double cost_at(std::int32_t i, std::int32_t j) const {
    return cost_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n1_) +
                 static_cast<std::size_t>(j)];
  }

  void add_edge(std::int32_t i, std::int32_t j, double flow) {
    const auto id = static_cast<std::int32_t>(edges_.size());
    edges_.push_back({i, j, flow});
    node_edges_[static_cast<std::size_t>(i)].push_back(id);
    node_edges_[static_cast<std::size_t>(n0_ + j)].push_back(id);
  }

  void drop_edge(std::int32_t id) {
    auto detach = [&](std::int32_t node, std::int32_t edge_id) {
      auto& list = node_edges_[static_cast<std::size_t>(node)];
      list.erase(std::find(list.begin(), list.end(), edge_id));
    };
    detach(edges_[static_cast<std::size_t>(id)].i, id);
    detach(n0_ + edges_[static_cast<std::size_t>(id)].j, id);
    const auto last = static_cast<std::int32_t>(edges_.size()) - 1;
    if (id != last) {
      detach(edges_[static_cast<std::size_t>(last)].i, last);
      detach(n0_ + edges_[static_cast<std::size_t>(last)].j, last);
      edges_[static_cast<std::size_t>(id)] = edges_[static_cast<std::size_t>(last)];
      node_edges_[static_cast<std::size_t>(edges_[static_cast<std::size_t>(id)].i)].push_back(id);
      node_edges_[static_cast<std::size_t>(n0_ + edges_[static_cast<std::size_t>(id)].j)].push_back(id);
    }
    edges_.pop_back();
  }

  /// Northwest-corner starting basis: a staircase spanning tree.
  void build_initial_basis() {
    std::vector<double> rs = supply_, rd = demand_;
    std::int32_t i = 0, j = 0;
    while (i < n0_ && j < n1_) {
      const double f = std::min(rs[static_cast<std::size_t>(i)], rd[static_cast<std::size_t>(j)]);
      add_edge(i, j, std::max(0.0, f));
      rs[static_cast<std::size_t>(i)] -= f;
      rd[static_cast<std::size_t>(j)] -= f;
      const bool src_done = rs[static_cast<std::size_t>(i)] <= rd[static_cast<std::size_t>(j)];
      if (src_done && i == n0_ - 1 && j < n1_ - 1) {
        ++j;  // keep the tree connected on the last row
      } else if (src_done) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  /// Recomputes parents, depths and potentials by a traversal from node 0.
  void refresh_tree() {
    const std::int32_t n = n0_ + n1_;
    std::fill(parent_.begin(), parent_.end(), -1);
    std::fill(parent_edge_.begin(), parent_edge_.end(), -1);
    stack_.clear();
    stack_.push_back(0);
    parent_[0] = 0;
    depth_[0] = 0;
    pot_[0] = 0.0;
    while (!stack_.empty()) {
      const std::int32_t x = stack_.back();
      stack_.pop_back();
      for (std::int32_t id : node_edges_[static_cast<std::size_t>(x)]) {
        const Edge& e = edges_[static_cast<std::size_t>(id)];
        const std::int32_t y = (x < n0_) ? n0_ + e.j : e.i;
        if (parent_[static_cast<std::size_t>(y)] >= 0) continue;
        parent_[static_cast<std::size_t>(y)] = x;
        parent_edge_[static_cast<std::size_t>(y)] = id;
        depth_[static_cast<std::size_t>(y)] = depth_[static_cast<std::size_t>(x)] + 1;
        pot_[static_cast<std::size_t>(y)] = cost_at(e.i, e.j) - pot_[static_cast<std::size_t>(x)];
        stack_.push_back(y);
      }
    }
    (void)n;
    parent_[0] = -1;
  }

  double reduced_cost(std::int64_t arc) const {
    const auto i = static_cast<std::int32_t>(arc / n1_);
    const auto j = static_cast<std::int32_t>(arc % n1_);
    return cost_[static_cast<std::size_t>(arc)] - pot_[static_cast<std::size_t>(i)] -
           pot_[static_cast<std::size_t>(n0_ + j)];
  }

  std::int64_t find_entering_block(std::int64_t& cursor, std::int64_t block) const {
    const std::int64_t arc_count = static_cast<std::int64_t>(n0_) * n1_;
    std::int64_t scanned = 0;
    std::int64_t pos = cursor;
    while (scanned < arc_count) {
      double best = -eps_;
      std::int64_t best_arc = -1;
      const std::int64_t stop = std::min(block, arc_count - scanned);
      for (std::int64_t s = 0; s < stop; ++s) {
        const double r = reduced_cost(pos);
        if (r < best) {  // strict: ties resolve to the first arc in scan order
          best = r;
          best_arc = pos;
        }
        if (++pos == arc_count) pos = 0;
      }
      scanned += stop;
      if (best_arc >= 0) {
        cursor = pos;
        return best_arc;
      }
    }
    return -1;
  }

  std::int64_t find_entering_bland(std::int64_t& cursor) const {
    const std::int64_t arc_count = static_cast<std::int64_t>(n0_) * n1_;
    for (std::int64_t arc = 0; arc < arc_count; ++arc) {
      if (reduced_cost(arc) < -eps_) {
        cursor = arc;
        return arc;
      }
    }
    return -1;
  }

  void pivot(std::int64_t entering) {
    const auto ei = static_cast<std::int32_t>(entering / n1_);
    const auto ej = static_cast<std::int32_t>(entering % n1_);
    std::int32_t x = ei;
    std::int32_t y = n0_ + ej;

    // Collect the tree path between the entering arc's endpoints. sign is the
    // flow change per unit pushed around the cycle (entering arc gets +1).
    cycle_.clear();
    std::int32_t a = x, b = y;
    // Walking from y towards the root means traversing each edge child->parent;
    // walking from x is the reverse. Pushing one unit x -> y along the entering
    // arc forces the return path y -> x through the tree.
    while (a != b) {
      if (depth_[static_cast<std::size_t>(a)] >= depth_[static_cast<std::size_t>(b)]) {
        const std::int32_t id = parent_edge_[static_cast<std::size_t>(a)];
        // Edge traversed parent->a on the return path: against arc direction if
        // a is the sink side, with it if a is the source side. The cycle
        // traverses x-side path edges in the direction away from the root.
        const bool a_is_sink = a >= n0_;
        cycle_.push_back({id, a_is_sink ? +1 : -1});
        a = parent_[static_cast<std::size_t>(a)];
      } else {
        const std::int32_t id = parent_edge_[static_cast<std::size_t>(b)];
        const bool b_is_sink = b >= n0_;
        cycle_.push_back({id, b_is_sink ? -1 : +1});
        b = parent_[static_cast<std::size_t>(b)];
      }
    }

    double delta = std::numeric_limits<double>::infinity();
    std::int32_t leaving = -1;
    std::int32_t leave_i = -1, leave_j = -1;
    for (const auto& [id, sign] : cycle_) {
      if (sign > 0) continue;
      const Edge& e = edges_[static_cast<std::size_t>(id)];
      const bool tighter =
          e.flow < delta - 1e-18 ||
          (std::abs(e.flow - delta) <= 1e-18 &&
           (leave_i < 0 || e.i < leave_i || (e.i == leave_i && e.j < leave_j)));
      if (tighter) {
        delta = e.flow;
        leaving = id;
        leave_i = e.i;
        leave_j = e.j;
      }
    }
    if (leaving < 0) throw Error("solve_w2: unbounded pivot (corrupt basis)");

    delta = std::max(delta, 0.0);
    if (delta > 0.0) {
      for (const auto& [id, sign] : cycle_) {
        Edge& e = edges_[static_cast<std::size_t>(id)];
        e.flow = sign > 0 ? e.flow + delta : std::max(0.0, e.flow - delta);
      }
    }
    drop_edge(leaving);
    add_edge(ei, ej, delta);
    refresh_tree();
  }

  std::int32_t n0_, n1_;
  const std::vector<double>& cost_;
  std::vector<double> supply_, demand_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::int32_t>> node_edges_;
  std::vector<std::int32_t> parent_, parent_edge_;
  std::vector<std::int32_t> depth_;
  std::vector<double> pot_;
  std::vector<std::int32_t> stack_;
  std::vector<std::pair<std::int32_t, int>> cycle_;
  double eps_;
};

std::vector<double> build_cost_matrix(const ModelSpace& space, const DiscreteMeasure& mu0,
                                      const DiscreteMeasure& mu1) {
  const std::size_t na = mu0.size(), nb = mu1.size();
  std::vector<double> cost(na * nb);
  if (space.is_euclidean()) {
    const int dim = space.ambient_dim();
    std::vector<double> ac[3], bc[3];
    for (int k = 0; k < dim; ++k) {
      ac[k].reserve(na);
      bc[k].reserve(nb);
    }
    for (const Point& p : mu0.points)
      for (int k = 0; k < dim; ++k) ac[k].push_back(p[k]);
    for (const Point& p : mu1.points)
      for (int k = 0; k < dim; ++k) bc[k].push_back(p[k]);
    const double* ap[3] = {ac[0].data(), ac[1].data(), ac[2].data()};
    const double* bp[3] = {bc[0].data(), bc[1].data(), bc[2].data()};
    kern::sqdist_matrix(dim, ap, na, bp, nb, cost.data());
  } else {
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j) {
        const double d = space.distance(mu0.points[i], mu1.points[j]);
        cost[i * nb + j] = d * d;
      }
  }
  return cost;
}

}  // namespace

double TransportPlan::w2() const { return std::sqrt(std::max(0.0, cost)); }

bool TransportPlan::induced_by_map() const {
  if (size() != mu0.size()) return false;
  std::vector<bool> seen(mu0.size(), false);
  for (std::int32_t s : src) {
    if (seen[static_cast<std::size_t>(s)]) return false;
    seen[static_cast<std::size_t>(s)] = true;
  }
  return true;
}

TransportPlan solve_w2(const ModelSpace& space, const DiscreteMeasure& mu0,
                       const DiscreteMeasure& mu1, const SolveOptions& opts) {
  if (mu0.size() == 0 || mu1.size() == 0) throw DomainError("solve_w2: empty marginal");
  if (mu0.size() > opts.atom_cap || mu1.size() > opts.atom_cap)
    throw ResourceError("solve_w2: marginal exceeds atom cap of " +
                        std::to_string(opts.atom_cap));
  const double m0 = mu0.total_mass(), m1 = mu1.total_mass();
  if (std::abs(m0 - 1.0) > 1e-8 || std::abs(m1 - 1.0) > 1e-8)
    throw DomainError("solve_w2: marginals must be probability measures");

  std::vector<double> supply = mu0.masses, demand = mu1.masses;
  // force exactly balanced totals so the starting basis closes
  double diff = 0.0;
  for (double s : supply) diff += s;
  for (double d : demand) diff -= d;
  demand.back() += diff;

  const std::vector<double> cost = build_cost_matrix(space, mu0, mu1);
  TransportSimplex simplex(std::move(supply), std::move(demand), cost);
  simplex.run();

  TransportPlan plan;
  plan.mu0 = mu0;
  plan.mu1 = mu1;
  auto arcs = simplex.basic_arcs();
  std::sort(arcs.begin(), arcs.end(), [](const auto& a, const auto& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  const std::size_t nb = mu1.size();
  for (const auto& arc : arcs) {
    if (!(arc.flow > 0.0)) continue;
    plan.src.push_back(arc.i);
    plan.dst.push_back(arc.j);
    plan.mass.push_back(arc.flow);
    const double d2 = cost[static_cast<std::size_t>(arc.i) * nb + static_cast<std::size_t>(arc.j)];
    plan.dist.push_back(std::sqrt(d2));
    plan.cost += arc.flow * d2;
  }
  return plan;
}

bool is_cyclically_monotone(const ModelSpace& space, const TransportPlan& plan, int k,
                            int trials, double tol, std::uint64_t seed) {
  if (k < 2) throw DomainError("is_cyclically_monotone: k must be >= 2");
  const std::size_t n = plan.size();
  if (n < static_cast<std::size_t>(k)) return true;  // no k-cycles to test

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;

  std::vector<std::size_t> pick(static_cast<std::size_t>(k));
  for (int trial = 0; trial < trials; ++trial) {
    // partial Fisher-Yates; self-contained for cross-platform reproducibility
    for (int i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> d(static_cast<std::size_t>(i), n - 1);
      std::swap(pool[static_cast<std::size_t>(i)], pool[d(rng)]);
      pick[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(i)];
    }
    double base = 0.0;
    for (int i = 0; i < k; ++i) {
      const auto p = pick[static_cast<std::size_t>(i)];
      base += plan.dist[p] * plan.dist[p];
    }
    for (int shift = 1; shift < k; ++shift) {
      double alt = 0.0;
      for (int i = 0; i < k; ++i) {
        const auto p = pick[static_cast<std::size_t>(i)];
        const auto q = pick[static_cast<std::size_t>((i + shift) % k)];
        const double d = space.distance(plan.mu0.points[static_cast<std::size_t>(plan.src[p])],
                                        plan.mu1.points[static_cast<std::size_t>(plan.dst[q])]);
        alt += d * d;
      }
      if (alt < base - tol) return false;
    }
  }
  return true;
}

}  // namespace curv
