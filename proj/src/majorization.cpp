#include "steerlat/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "steerlat/common.hpp"

namespace steerlat::majorization {

namespace {

constexpr double kNegativeClamp = -1e-12;
constexpr double kTotalTol = 1e-9;
constexpr double kCompareSlack = 1e-12;

void check_equal_totals(double ta, double tb, const char* what) {
  if (std::abs(ta - tb) > kTotalTol)
    throw ValidationError(std::string(what) + ": totals differ (" +
                          std::to_string(ta) + " vs " + std::to_string(tb) +
                          ")");
}

// Common-length prefix-sum tables for a pair, zero-padded.
struct PrefixPair {
  std::vector<double> a, b;  // size n+1, entry 0 = 0
};

PrefixPair prefixes(const ProbVector& x, const ProbVector& y) {
  std::size_t n = std::max(x.size(), y.size());
  PrefixPair p;
  p.a.resize(n + 1, 0.0);
  p.b.resize(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    p.a[k] = p.a[k - 1] + (k <= x.size() ? x[k - 1] : 0.0);
    p.b[k] = p.b[k - 1] + (k <= y.size() ? y[k - 1] : 0.0);
  }
  return p;
}

ProbVector from_envelope(const std::vector<double>& env) {
  std::vector<double> inc(env.size() - 1);
  for (std::size_t k = 1; k < env.size(); ++k) inc[k - 1] = env[k] - env[k - 1];
  return ProbVector(std::move(inc));
}

ProbVector fold(std::span<const ProbVector> vs, const char* what,
                const std::function<ProbVector(const ProbVector&,
                                               const ProbVector&)>& op) {
  if (vs.empty()) throw ValidationError(std::string(what) + ": empty input");
  ProbVector acc = vs[0];
  for (std::size_t i = 1; i < vs.size(); ++i) acc = op(acc, vs[i]);
  return acc;
}

}  // namespace

ProbVector::ProbVector(std::vector<double> components) : c_(std::move(components)) {
  if (c_.empty()) throw ValidationError("ProbVector: empty");
  for (double& v : c_) {
    if (!std::isfinite(v))
      throw ValidationError("ProbVector: non-finite component");
    if (v < 0) {
      if (v < kNegativeClamp)
        throw ValidationError("ProbVector: negative component " +
                              std::to_string(v));
      v = 0.0;
    }
  }
  std::sort(c_.begin(), c_.end(), std::greater<>());
  prefix_.resize(c_.size() + 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    prefix_[i + 1] = prefix_[i] + c_[i];
  if (prefix_.back() <= 0)
    throw ValidationError("ProbVector: total is not positive");
}

double ProbVector::top_k_sum(std::size_t k) const {
  if (k > c_.size())
    throw ValidationError("top_k_sum: k exceeds size");
  return prefix_[k];
}

int Partition::index_count() const {
  int n = 0;
  for (const auto& b : blocks) n += static_cast<int>(b.size());
  return n;
}

void Partition::validate(int n) const {
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (const auto& b : blocks) {
    for (int i : b) {
      if (i < 0 || i >= n)
        throw ValidationError("Partition: index " + std::to_string(i) +
                              " out of range 0.." + std::to_string(n - 1));
      if (seen[static_cast<std::size_t>(i)])
        throw ValidationError("Partition: index " + std::to_string(i) +
                              " repeated");
      seen[static_cast<std::size_t>(i)] = 1;
    }
  }
  if (index_count() != n)
    throw ValidationError("Partition: blocks do not cover all indices");
}

bool majorizes(const ProbVector& p, const ProbVector& q) {
  check_equal_totals(p.total(), q.total(), "majorizes");
  auto pre = prefixes(q, p);  // a = q, b = p
  for (std::size_t k = 1; k < pre.a.size(); ++k)
    if (pre.a[k] > pre.b[k] + kCompareSlack) return false;
  return true;
}

Partition cyclic_diagonal_partition(int d) {
  if (d < 1) throw ValidationError("cyclic_diagonal_partition: d must be >= 1");
  Partition part;
  part.blocks.resize(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    auto& block = part.blocks[static_cast<std::size_t>(k)];
    block.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) block.push_back(i * d + (i + k) % d);
  }
  return part;
}

std::vector<double> block_sums(std::span<const double> raw,
                               const Partition& part) {
  part.validate(static_cast<int>(raw.size()));
  std::vector<double> sums;
  sums.reserve(part.blocks.size());
  for (const auto& b : part.blocks) {
    double s = 0;
    for (int i : b) s += raw[static_cast<std::size_t>(i)];
    sums.push_back(s);
  }
  return sums;
}

ProbVector aggregate(std::span<const double> raw, const Partition& part) {
  return ProbVector(block_sums(raw, part));
}

ProbVector aggregate(const ProbVector& p, const Partition& part) {
  return aggregate(std::span<const double>(p.components()), part);
}

ProbVector combine(const ProbVector& p, const ProbVector& q, CombineOp op) {
  switch (op) {
    case CombineOp::tensor: {
      std::vector<double> out;
      out.reserve(p.size() * q.size());
      for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) out.push_back(p[i] * q[j]);
      return ProbVector(std::move(out));
    }
    case CombineOp::direct_sum: {
      std::vector<double> out = p.components();
      out.insert(out.end(), q.components().begin(), q.components().end());
      return ProbVector(std::move(out));
    }
    case CombineOp::vector_sum: {
      if (p.size() != q.size())
        throw ValidationError("combine: vector_sum requires equal sizes");
      std::vector<double> out(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] + q[i];
      return ProbVector(std::move(out));
    }
  }
  throw ValidationError("combine: unknown operation");
}

std::vector<double> flatten_increments(std::vector<double> increments) {
  // Pool adjacent violators: maintain a stack of (sum, count) blocks with
  // strictly nonincreasing means; merging averages the offending run.
  std::vector<std::pair<double, std::size_t>> stack;
  stack.reserve(increments.size());
  for (double v : increments) {
    stack.emplace_back(v, 1);
    while (stack.size() > 1) {
      auto& [s2, n2] = stack[stack.size() - 1];
      auto& [s1, n1] = stack[stack.size() - 2];
      if (s1 * static_cast<double>(n2) >= s2 * static_cast<double>(n1)) break;
      s1 += s2;
      n1 += n2;
      stack.pop_back();
    }
  }
  std::vector<double> out;
  out.reserve(increments.size());
  for (auto& [s, n] : stack) {
    double mean = s / static_cast<double>(n);
    out.insert(out.end(), n, mean);
  }
  return out;
}

ProbVector join(const ProbVector& a, const ProbVector& b) {
  check_equal_totals(a.total(), b.total(), "join");
  auto pre = prefixes(a, b);
  std::vector<double> env(pre.a.size());
  for (std::size_t k = 0; k < env.size(); ++k)
    env[k] = std::max(pre.a[k], pre.b[k]);
  std::vector<double> inc(env.size() - 1);
  for (std::size_t k = 1; k < env.size(); ++k) inc[k - 1] = env[k] - env[k - 1];
  return ProbVector(flatten_increments(std::move(inc)));
}

ProbVector meet(const ProbVector& a, const ProbVector& b) {
  check_equal_totals(a.total(), b.total(), "meet");
  auto pre = prefixes(a, b);
  // The pointwise min of two concave nondecreasing envelopes is itself
  // concave: the increments are already nonincreasing, no flattening.
  std::vector<double> env(pre.a.size());
  for (std::size_t k = 0; k < env.size(); ++k)
    env[k] = std::min(pre.a[k], pre.b[k]);
  return from_envelope(env);
}

ProbVector join(std::span<const ProbVector> vs) {
  return fold(vs, "join", [](const ProbVector& x, const ProbVector& y) {
    return join(x, y);
  });
}

ProbVector meet(std::span<const ProbVector> vs) {
  return fold(vs, "meet", [](const ProbVector& x, const ProbVector& y) {
    return meet(x, y);
  });
}

}  // namespace steerlat::majorization
