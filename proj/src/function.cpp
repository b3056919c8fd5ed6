#include "chancomp/function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace chancomp {

namespace {

void check_dims(int K, int q) {
    if (K < 2) throw std::invalid_argument("node count K must be >= 2");
    if (q < 2) throw std::invalid_argument("quantization level count q must be >= 2");
}

}  // namespace

double value_equality_tolerance(double scale) {
    return 1e-9 * std::max(1.0, std::abs(scale));
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        // result * (n-k+i) stays exact: divide by i only after multiply,
        // and the running value is always an integer.
        std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
        if (result > std::numeric_limits<std::uint64_t>::max() / num)
            throw std::overflow_error("binomial overflows 64 bits");
        result = result * num / static_cast<std::uint64_t>(i);
    }
    return result;
}

std::uint64_t input_space_size(int K, int q, std::uint64_t guard) {
    check_dims(K, q);
    std::uint64_t size = 1;
    for (int k = 0; k < K; ++k) {
        if (size > guard / static_cast<std::uint64_t>(q))
            throw std::length_error("input space q^K exceeds enumeration guard");
        size *= static_cast<std::uint64_t>(q);
    }
    if (size > guard) throw std::length_error("input space q^K exceeds enumeration guard");
    return size;
}

std::vector<int> index_to_tuple(std::uint64_t m, int K, int q) {
    check_dims(K, q);
    std::vector<int> tuple(static_cast<std::size_t>(K));
    std::uint64_t rest = m;
    for (int k = 0; k < K; ++k) {
        tuple[static_cast<std::size_t>(k)] = static_cast<int>(rest % static_cast<std::uint64_t>(q));
        rest /= static_cast<std::uint64_t>(q);
    }
    if (rest != 0) throw std::out_of_range("input index exceeds q^K");
    return tuple;
}

std::uint64_t tuple_to_index(const std::vector<int>& tuple, int q) {
    std::uint64_t m = 0;
    for (std::size_t k = tuple.size(); k-- > 0;) {
        int level = tuple[k];
        if (level < 0 || level >= q) throw std::out_of_range("tuple level outside [0, q)");
        m = m * static_cast<std::uint64_t>(q) + static_cast<std::uint64_t>(level);
    }
    return m;
}

FunctionSpec make_preset(const std::string& name, int K, int q) {
    check_dims(K, q);
    FunctionSpec spec;
    spec.K = K;
    spec.q = q;
    spec.name = name;
    if (name == "sum") {
        spec.evaluator = [](const std::vector<int>& t) {
            double acc = 0;
            for (int v : t) acc += v;
            return acc;
        };
    } else if (name == "product") {
        spec.evaluator = [](const std::vector<int>& t) {
            double acc = 1;
            for (int v : t) acc *= v;
            return acc;
        };
    } else if (name == "max") {
        spec.evaluator = [](const std::vector<int>& t) {
            return static_cast<double>(*std::max_element(t.begin(), t.end()));
        };
    } else if (name == "quadratic") {
        spec.evaluator = [](const std::vector<int>& t) {
            double acc = 0;
            for (int v : t) acc += static_cast<double>(v) * v;
            return acc;
        };
    } else {
        throw std::invalid_argument("unknown function preset: " + name);
    }
    return spec;
}

FunctionSpec make_table_function(int K, int q, std::vector<double> values) {
    const std::uint64_t size = input_space_size(K, q);
    if (values.size() != size)
        throw std::invalid_argument("value table must hold exactly q^K entries");
    FunctionSpec spec;
    spec.K = K;
    spec.q = q;
    spec.name = "custom";
    spec.evaluator = [K, q, table = std::move(values)](const std::vector<int>& t) {
        if (static_cast<int>(t.size()) != K) throw std::invalid_argument("tuple arity mismatch");
        return table[tuple_to_index(t, q)];
    };
    return spec;
}

bool verify_symmetry(const FunctionSpec& spec, std::uint64_t guard) {
    const std::uint64_t size = input_space_size(spec.K, spec.q, guard);
    std::vector<int> sorted;
    double scale = 1.0;
    for (std::uint64_t m = 0; m < size; ++m) {
        const std::vector<int> tuple = index_to_tuple(m, spec.K, spec.q);
        sorted = tuple;
        std::sort(sorted.begin(), sorted.end());
        const double a = spec.evaluator(tuple);
        const double b = spec.evaluator(sorted);
        scale = std::max({scale, std::abs(a), std::abs(b)});
        if (std::abs(a - b) > value_equality_tolerance(scale)) return false;
    }
    return true;
}

std::vector<MultisetClass> enumerate_multiset_classes(const FunctionSpec& spec,
                                                      std::uint64_t guard) {
    const std::uint64_t size = input_space_size(spec.K, spec.q, guard);
    std::map<std::vector<int>, std::size_t> index_of_counts;
    std::vector<MultisetClass> classes;
    std::vector<int> counts(static_cast<std::size_t>(spec.q));
    for (std::uint64_t m = 0; m < size; ++m) {
        const std::vector<int> tuple = index_to_tuple(m, spec.K, spec.q);
        std::fill(counts.begin(), counts.end(), 0);
        for (int level : tuple) counts[static_cast<std::size_t>(level)]++;
        const double value = spec.evaluator(tuple);
        auto [it, inserted] = index_of_counts.try_emplace(counts, classes.size());
        if (inserted) {
            classes.push_back(MultisetClass{counts, m, value});
        } else {
            const MultisetClass& cls = classes[it->second];
            const double tol = value_equality_tolerance(std::max(std::abs(cls.value), std::abs(value)));
            if (std::abs(cls.value - value) > tol)
                throw NonSymmetricFunction(
                    "tuples with identical level multiset evaluate to different values "
                    "(function is not symmetric)");
        }
    }
    return classes;
}

RangeSet range_set(const FunctionSpec& spec, std::uint64_t guard) {
    const std::vector<MultisetClass> classes = enumerate_multiset_classes(spec, guard);
    std::vector<double> values;
    values.reserve(classes.size());
    for (const MultisetClass& cls : classes) values.push_back(cls.value);
    std::sort(values.begin(), values.end());
    double scale = 1.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    const double tol = value_equality_tolerance(scale);
    std::vector<double> distinct;
    for (double v : values)
        if (distinct.empty() || v - distinct.back() > tol) distinct.push_back(v);
    return RangeSet{std::move(distinct)};
}

Eigen::MatrixXd build_selection_matrix(int K, int q, std::uint64_t guard) {
    const std::uint64_t size = input_space_size(K, q, guard);
    const std::uint64_t cells = size * static_cast<std::uint64_t>(K) * static_cast<std::uint64_t>(q);
    if (cells > 100'000'000ull)
        throw std::length_error("selection matrix too large to materialize");
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(size),
                                              static_cast<Eigen::Index>(q) * K);
    for (std::uint64_t m = 0; m < size; ++m) {
        const std::vector<int> tuple = index_to_tuple(m, K, q);
        for (int k = 0; k < K; ++k)
            A(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k) * q + tuple[static_cast<std::size_t>(k)]) = 1.0;
    }
    return A;
}

}  // namespace chancomp
