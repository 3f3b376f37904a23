#include "qgreedy/census.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include <fmt/format.h>

#include "qgreedy/errors.hpp"

namespace qgreedy {

namespace {

class ShellGrower {
 public:
  ShellGrower(int depth, int max_degree) : depth_(depth), max_degree_(max_degree) {}

  // Extends every partial cone whose outer shell is `shell - 1` by one shell.
  std::vector<LightCone> grow(const std::vector<LightCone>& partials, int shell) {
    shell_ = shell;
    next_.clear();
    seen_.clear();
    for (const auto& cone : partials) {
      base_ = cone;
      outer_.clear();
      for (int v = 0; v < cone.size(); ++v)
        if (cone.dist[v] == shell - 1) outer_.push_back(v);
      degree_ = cone.degrees();
      pairs_.clear();
      for (std::size_t a = 0; a < outer_.size(); ++a)
        for (std::size_t b = a + 1; b < outer_.size(); ++b) pairs_.emplace_back(outer_[a], outer_[b]);
      intra_.clear();
      choose_intra(0);
    }
    return std::move(next_);
  }

 private:
  // Edges inside the outer shell (allowed because shell - 1 <= depth - 1).
  void choose_intra(std::size_t k) {
    if (k == pairs_.size()) {
      start_attachments();
      return;
    }
    choose_intra(k + 1);
    const auto [u, v] = pairs_[k];
    if (degree_[u] < max_degree_ && degree_[v] < max_degree_) {
      ++degree_[u];
      ++degree_[v];
      intra_.push_back(pairs_[k]);
      choose_intra(k + 1);
      intra_.pop_back();
      --degree_[u];
      --degree_[v];
    }
  }

  void start_attachments() {
    // nonempty subsets of the outer shell with at most max_degree members,
    // restricted to vertices that still have a free slot
    subsets_.clear();
    const int width = static_cast<int>(outer_.size());
    for (unsigned mask = 1; mask < (1u << width); ++mask) {
      if (std::popcount(mask) > max_degree_) continue;
      bool ok = true;
      for (int b = 0; b < width && ok; ++b)
        if ((mask >> b) & 1u) ok = degree_[outer_[b]] < max_degree_;
      if (ok) subsets_.push_back(mask);
    }
    chosen_.clear();
    choose_attachments(0);
  }

  void choose_attachments(std::size_t k) {
    if (k == subsets_.size()) {
      emit();
      return;
    }
    choose_attachments(k + 1);
    const unsigned mask = subsets_[k];
    int taken = 0;
    while (fits(mask)) {
      adjust(mask, +1);
      chosen_.push_back(mask);
      ++taken;
      choose_attachments(k + 1);
    }
    for (; taken > 0; --taken) {
      chosen_.pop_back();
      adjust(mask, -1);
    }
  }

  bool fits(unsigned mask) const {
    for (std::size_t b = 0; b < outer_.size(); ++b)
      if (((mask >> b) & 1u) && degree_[outer_[b]] >= max_degree_) return false;
    return true;
  }

  void adjust(unsigned mask, int delta) {
    for (std::size_t b = 0; b < outer_.size(); ++b)
      if ((mask >> b) & 1u) degree_[outer_[b]] += delta;
  }

  void emit() {
    LightCone c = base_;
    for (const auto& e : intra_) c.edges.push_back(e);
    for (unsigned mask : chosen_) {
      const int fresh = c.size();
      c.dist.push_back(shell_);
      for (std::size_t b = 0; b < outer_.size(); ++b)
        if ((mask >> b) & 1u) c.edges.emplace_back(outer_[b], fresh);
    }
    std::sort(c.edges.begin(), c.edges.end());
    CanonicalKey key = canonical_key(c);
    if (seen_.insert(key.bytes()).second) next_.push_back(std::move(c));
  }

  int depth_;
  int max_degree_;
  int shell_ = 0;
  LightCone base_;
  std::vector<int> outer_;
  std::vector<int> degree_;
  std::vector<Edge> pairs_;
  std::vector<Edge> intra_;
  std::vector<unsigned> subsets_;
  std::vector<unsigned> chosen_;
  std::vector<LightCone> next_;
  std::unordered_set<std::string> seen_;
};

}  // namespace

Census enumerate_cones(int p, int d) {
  if (p < 1 || p > 3) throw InfeasibleError(fmt::format("census: depth {} outside the supported range 1..3", p));
  if (d != 3) throw InfeasibleError(fmt::format("census: only degree 3 is supported, got {}", d));

  LightCone root;
  root.depth = p;
  root.roots = 1;
  root.dist = {0};
  std::vector<LightCone> partials{root};
  ShellGrower grower(p, d);
  for (int shell = 1; shell <= p; ++shell) partials = grower.grow(partials, shell);

  Census census;
  census.report.depth = p;
  std::vector<std::pair<CanonicalKey, LightCone>> keyed;
  keyed.reserve(partials.size());
  for (auto& c : partials) {
    CanonicalKey key = canonical_key(c);
    keyed.emplace_back(std::move(key), std::move(c));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [key, cone] : keyed) {
    ++census.report.total;
    if (key.is_tree())
      ++census.report.trees;
    else
      ++census.report.non_trees;
    census.keys.push_back(std::move(key));
    census.cones.push_back(std::move(cone));
  }
  return census;
}

}  // namespace qgreedy
