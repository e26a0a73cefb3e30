#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace steerlat::majorization {

// Probability vector stored sorted nonincreasing with cached partial sums.
// Construction clamps tiny negatives (>= -1e-12) to zero and rejects
// anything more negative; the total may be any positive value (conditional
// slices are handled by the callers), but comparisons require equal totals.
class ProbVector {
 public:
  explicit ProbVector(std::vector<double> components);

  const std::vector<double>& components() const { return c_; }
  std::size_t size() const { return c_.size(); }
  double operator[](std::size_t i) const { return c_[i]; }
  double total() const { return prefix_.empty() ? 0.0 : prefix_.back(); }

  // Sum of the k largest components, 0 <= k <= size.
  double top_k_sum(std::size_t k) const;

 private:
  std::vector<double> c_;
  std::vector<double> prefix_;
};

// Blocks of 0-based indices; valid iff they disjointly cover 0..n-1.
struct Partition {
  std::vector<std::vector<int>> blocks;

  int index_count() const;
  void validate(int n) const;  // throws ValidationError
};

// True iff q is majorized by p: every top-k partial sum of q is <= p's,
// requiring equal totals within 1e-9 (comparison slack 1e-12).
bool majorizes(const ProbVector& p, const ProbVector& q);

// Partition of the row-major d*d grid into d cyclic diagonals; block k
// holds the pairs (i, (i+k) mod d).  Block 0 is the main diagonal.
Partition cyclic_diagonal_partition(int d);

// Per-block sums of a raw array in its stored order (not sorted).
std::vector<double> block_sums(std::span<const double> raw,
                               const Partition& part);

// Aggregated distribution: block sums, then sorted into a ProbVector.
// The raw overload indexes `raw` directly; the ProbVector overload indexes
// the sorted components of p.
ProbVector aggregate(std::span<const double> raw, const Partition& part);
ProbVector aggregate(const ProbVector& p, const Partition& part);

enum class CombineOp {
  tensor,      // all pairwise products
  direct_sum,  // concatenation
  vector_sum,  // componentwise sum of the sorted inputs; equal sizes required
};

ProbVector combine(const ProbVector& p, const ProbVector& q, CombineOp op);

// Pool-adjacent-violators pass over increments: averages increasing runs
// until the sequence is nonincreasing.  The partial sums of the output form
// the least concave majorant of the input's partial sums.
std::vector<double> flatten_increments(std::vector<double> increments);

// Least upper bound / greatest lower bound in the majorization order.
// Inputs are zero-padded to a common length and must share totals to 1e-9.
ProbVector join(const ProbVector& a, const ProbVector& b);
ProbVector meet(const ProbVector& a, const ProbVector& b);
ProbVector join(std::span<const ProbVector> vs);
ProbVector meet(std::span<const ProbVector> vs);

}  // namespace steerlat::majorization
