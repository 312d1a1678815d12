#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fpklab/error.hpp"
#include "fpklab/transport.hpp"

namespace fpk::transport {

namespace {

// Primal network simplex on the complete bipartite graph sources → sinks.
// Real arc a = i * nd + j is implicit; every node also owns an artificial arc
// to the root used by the starting tree. The spanning tree is stored through
// parent links, the arc to the parent and its orientation, and child lists.
// The leaving-arc rule keeps the tree strongly feasible, which rules out
// cycling under degenerate pivots.
class NetworkSimplex {
 public:
  NetworkSimplex(std::span<const Atom> sources, std::span<const std::int64_t> supply, std::span<const Atom> sinks,
                 std::span<const std::int64_t> demand, double p)
      : src_(sources), dst_(sinks), p_(p), ns_(sources.size()), nd_(sinks.size()), root_(ns_ + nd_),
        arcs_(static_cast<std::int64_t>(ns_ * nd_)) {
    const std::size_t n = root_ + 1;
    parent_.assign(n, kNone);
    pred_.assign(n, -1);
    up_.assign(n, 0);
    flow_.assign(n, 0);
    pi_.assign(n, 0.0);
    children_.assign(n, {});
    stamp_.assign(n, 0);

    double max_cost = 0.0;
    for (const auto& a : src_)
      for (const auto& b : dst_) max_cost = std::max(max_cost, cost(a, b));
    art_ = (max_cost + 1.0) * static_cast<double>(n);
    eps_ = 1e-8 * (max_cost + 1.0);

    for (std::size_t u = 0; u < root_; ++u) {
      parent_[u] = root_;
      pred_[u] = arcs_ + static_cast<std::int64_t>(u);
      children_[root_].push_back(u);
      if (u < ns_) {
        up_[u] = 1;
        flow_[u] = supply[u];
        pi_[u] = 0.0;
      } else {
        up_[u] = 0;
        flow_[u] = demand[u - ns_];
        pi_[u] = art_;
      }
    }
    block_ = std::max<std::int64_t>(10, static_cast<std::int64_t>(std::sqrt(static_cast<double>(arcs_))));
  }

  TransportPlan solve() {
    TransportPlan plan;
    std::int64_t entering;
    double rc;
    while (find_entering(entering, rc)) {
      pivot(entering, rc);
      ++plan.pivots;
    }
    for (std::size_t u = 0; u < root_; ++u) {
      if (pred_[u] >= arcs_) {
        if (flow_[u] != 0) fail(ErrorKind::SearchFailure, "transport problem is infeasible");
        continue;
      }
      if (flow_[u] == 0) continue;
      const auto i = static_cast<std::size_t>(pred_[u]) / nd_;
      const auto j = static_cast<std::size_t>(pred_[u]) % nd_;
      plan.cost += static_cast<double>(flow_[u]) * cost(src_[i], dst_[j]);
      plan.flows.emplace_back(i, j, flow_[u]);
    }
    std::sort(plan.flows.begin(), plan.flows.end());
    return plan;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  double cost(const Atom& a, const Atom& b) const {
    const double dx = a.x - b.x, dy = a.y - b.y;
    const double d2 = dx * dx + dy * dy;
    if (p_ == 2.0) return d2;
    if (p_ == 1.0) return std::sqrt(d2);
    return std::pow(d2, 0.5 * p_);
  }

  std::size_t arc_source(std::int64_t a) const {
    if (a < arcs_) return static_cast<std::size_t>(a) / nd_;
    const auto u = static_cast<std::size_t>(a - arcs_);
    return u < ns_ ? u : root_;
  }
  std::size_t arc_target(std::int64_t a) const {
    if (a < arcs_) return ns_ + static_cast<std::size_t>(a) % nd_;
    const auto u = static_cast<std::size_t>(a - arcs_);
    return u < ns_ ? root_ : u;
  }
  double reduced_cost(std::int64_t a) const {
    const auto i = static_cast<std::size_t>(a) / nd_;
    const auto j = static_cast<std::size_t>(a) % nd_;
    return cost(src_[i], dst_[j]) + pi_[i] - pi_[ns_ + j];
  }

  // Block search: scan blocks of arcs cyclically, take the most negative
  // reduced cost of the first block that has one.
  bool find_entering(std::int64_t& entering, double& rc) {
    double best = -eps_;
    std::int64_t found = -1;
    std::int64_t count = 0;
    for (std::int64_t k = 0; k < arcs_; ++k) {
      const std::int64_t a = (next_ + k) % arcs_;
      const double r = reduced_cost(a);
      if (r < best) {
        best = r;
        found = a;
      }
      if (++count == block_) {
        if (found >= 0) {
          next_ = (a + 1) % arcs_;
          break;
        }
        count = 0;
      }
    }
    if (found < 0) return false;
    entering = found;
    rc = best;
    return true;
  }

  void remove_child(std::size_t parent, std::size_t child) {
    auto& c = children_[parent];
    c.erase(std::find(c.begin(), c.end(), child));
  }

  void pivot(std::int64_t entering, double rc) {
    const std::size_t s = arc_source(entering), t = arc_target(entering);
    ++epoch_;
    for (std::size_t u = s; u != kNone; u = parent_[u]) stamp_[u] = epoch_;
    std::size_t join = t;
    while (stamp_[join] != epoch_) join = parent_[join];

    // Flow travels s → t on the entering arc and back t → join → s.
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
    std::int64_t delta = kInf;
    std::size_t u_out = kNone;
    int side = 0;
    for (std::size_t u = s; u != join; u = parent_[u]) {
      const std::int64_t d = up_[u] ? flow_[u] : kInf;
      if (d < delta) {
        delta = d;
        u_out = u;
        side = 1;
      }
    }
    for (std::size_t u = t; u != join; u = parent_[u]) {
      const std::int64_t d = up_[u] ? kInf : flow_[u];
      if (d <= delta) {
        delta = d;
        u_out = u;
        side = 2;
      }
    }
    if (side == 0) fail(ErrorKind::SearchFailure, "transport pivot found no blocking arc");

    if (delta > 0) {
      for (std::size_t u = s; u != join; u = parent_[u]) flow_[u] += up_[u] ? -delta : delta;
      for (std::size_t u = t; u != join; u = parent_[u]) flow_[u] += up_[u] ? delta : -delta;
    }

    // Re-hang the subtree cut off at u_out from the entering arc's endpoint
    // on its side, reversing the path between them.
    const std::size_t v_in = side == 1 ? s : t;
    const std::size_t u_in = side == 1 ? t : s;
    path_.clear();
    for (std::size_t u = v_in;; u = parent_[u]) {
      path_.push_back(u);
      if (u == u_out) break;
    }
    remove_child(parent_[u_out], u_out);
    for (std::size_t k = path_.size() - 1; k >= 1; --k) {
      const std::size_t w = path_[k], below = path_[k - 1];
      remove_child(w, below);
      children_[below].push_back(w);
      parent_[w] = below;
      pred_[w] = pred_[below];
      up_[w] = up_[below] ? 0 : 1;
      flow_[w] = flow_[below];
    }
    parent_[v_in] = u_in;
    pred_[v_in] = entering;
    up_[v_in] = v_in == s ? 1 : 0;
    flow_[v_in] = delta;
    children_[u_in].push_back(v_in);

    const double shift = v_in == s ? -rc : rc;
    stack_.assign(1, v_in);
    while (!stack_.empty()) {
      const std::size_t u = stack_.back();
      stack_.pop_back();
      pi_[u] += shift;
      for (std::size_t c : children_[u]) stack_.push_back(c);
    }
  }

  std::span<const Atom> src_, dst_;
  double p_;
  std::size_t ns_, nd_, root_;
  std::int64_t arcs_;
  double art_ = 0.0;
  double eps_ = 0.0;
  std::int64_t block_ = 10;
  std::int64_t next_ = 0;
  std::uint64_t epoch_ = 0;

  std::vector<std::size_t> parent_;
  std::vector<std::int64_t> pred_;
  std::vector<char> up_;
  std::vector<std::int64_t> flow_;
  std::vector<double> pi_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::uint64_t> stamp_;
  std::vector<std::size_t> path_;
  std::vector<std::size_t> stack_;
};

}  // namespace

TransportPlan exact_transport(std::span<const Atom> sources, std::span<const std::int64_t> supply,
                              std::span<const Atom> sinks, std::span<const std::int64_t> demand, double p) {
  require(p >= 1.0, "transport cost exponent must be >= 1");
  require(!sources.empty() && !sinks.empty(), "transport needs atoms on both sides");
  require(supply.size() == sources.size() && demand.size() == sinks.size(), "mass arrays do not match the atoms");
  require(std::all_of(supply.begin(), supply.end(), [](auto m) { return m >= 0; }) &&
              std::all_of(demand.begin(), demand.end(), [](auto m) { return m >= 0; }),
          "transport masses must be nonnegative");
  const auto total_s = std::accumulate(supply.begin(), supply.end(), std::int64_t{0});
  const auto total_d = std::accumulate(demand.begin(), demand.end(), std::int64_t{0});
  require(total_s == total_d, "transport needs equal total supply and demand");
  return NetworkSimplex(sources, supply, sinks, demand, p).solve();
}

}  // namespace fpk::transport
