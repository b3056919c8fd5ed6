// Target-function layer: symmetric K-variate functions over q quantization
// levels, enumeration of the input space, and the multiset-class reduction
// that ties input tuples to received constellation points.
#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace chancomp {

// Brute-force enumeration guard: operations that walk all q^K tuples refuse
// to run past this many tuples unless the caller raises the limit.
inline constexpr std::uint64_t kEnumerationGuard = 1'000'000;

// A K-variate real-valued function on level tuples in {0..q-1}^K.
// The evaluator must be total and symmetric under argument permutation;
// verify_symmetry() checks the latter by brute force.
struct FunctionSpec {
    int K = 0;
    int q = 0;
    std::function<double(const std::vector<int>&)> evaluator;
    std::string name;  // sum | product | max | quadratic | custom
};

class NonSymmetricFunction : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Equivalence class of input tuples sharing the same level multiset.
// With a common per-node encoder all tuples of a class superpose to the
// same constellation point counts . x.
struct MultisetClass {
    std::vector<int> counts;       // length q, sums to K
    std::uint64_t representative;  // smallest member input index
    double value;                  // f on any member tuple
};

// Sorted distinct outputs of f over the whole input space.
struct RangeSet {
    std::vector<double> values;
    std::size_t cardinality() const { return values.size(); }
};

// Presets: sum, product, max, quadratic (= sum of squares), all on raw
// level values 0..q-1.
FunctionSpec make_preset(const std::string& name, int K, int q);

// Function given as an explicit value table, q^K entries in input-index
// order (see tuple_to_index for the ordering).
FunctionSpec make_table_function(int K, int q, std::vector<double> values);

// q^K, throwing if it exceeds the guard.
std::uint64_t input_space_size(int K, int q, std::uint64_t guard = kEnumerationGuard);

// Input index m encodes the level tuple in mixed radix base q with node 1
// as the least significant digit.
std::vector<int> index_to_tuple(std::uint64_t m, int K, int q);
std::uint64_t tuple_to_index(const std::vector<int>& tuple, int q);

// True iff evaluator(t) == evaluator(sorted(t)) for every tuple, up to a
// relative tolerance absorbing permuted-order rounding.
bool verify_symmetry(const FunctionSpec& spec, std::uint64_t guard = kEnumerationGuard);

// All multiset classes, in order of first appearance by input index.
// Throws NonSymmetricFunction if two tuples of one class disagree on f.
std::vector<MultisetClass> enumerate_multiset_classes(const FunctionSpec& spec,
                                                      std::uint64_t guard = kEnumerationGuard);

RangeSet range_set(const FunctionSpec& spec, std::uint64_t guard = kEnumerationGuard);

// M x qK binary selection matrix: row of tuple t has a one at
// (k-1)q + t_k for each node k, so row . (1_K (x) x) = sum_k x[t_k].
Eigen::MatrixXd build_selection_matrix(int K, int q, std::uint64_t guard = kEnumerationGuard);

// Exact binomial C(n, k) in 64 bits; throws on overflow.
std::uint64_t binomial(int n, int k);

// Tolerance for deciding that two function outputs are the same value.
// A relative slack absorbs rounding from evaluating f in permuted argument
// order (e.g. floating-point sums).
double value_equality_tolerance(double scale);

}  // namespace chancomp
