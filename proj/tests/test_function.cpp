#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "chancomp/function.hpp"

using namespace chancomp;

namespace {

FunctionSpec difference_function(int q) {
    FunctionSpec spec;
    spec.K = 2;
    spec.q = q;
    spec.name = "custom";
    spec.evaluator = [](const std::vector<int>& t) {
        return static_cast<double>(t[0] - t[1]);
    };
    return spec;
}

}  // namespace

TEST_SUITE("function-core") {

TEST_CASE("index/tuple round trip examples") {
    CHECK(index_to_tuple(0, 2, 2) == std::vector<int>{0, 0});
    CHECK(index_to_tuple(3, 2, 2) == std::vector<int>{1, 1});
    // 6 = 2 + 1*4 in base 4, node 1 least significant.
    CHECK(index_to_tuple(6, 2, 4) == std::vector<int>{2, 1});
    CHECK_THROWS_AS(index_to_tuple(4, 2, 2), std::out_of_range);
}

TEST_CASE("index/tuple bijection") {
    for (auto [K, q] : {std::pair{2, 2}, std::pair{3, 3}, std::pair{2, 5}, std::pair{4, 3}}) {
        const std::uint64_t size = input_space_size(K, q);
        for (std::uint64_t m = 0; m < size; ++m)
            CHECK(tuple_to_index(index_to_tuple(m, K, q), q) == m);
    }
}

TEST_CASE("symmetry verification") {
    CHECK(verify_symmetry(make_preset("sum", 2, 2)));
    CHECK(verify_symmetry(make_preset("max", 3, 4)));
    CHECK_FALSE(verify_symmetry(difference_function(2)));
}

TEST_CASE("enumeration guard") {
    FunctionSpec spec = make_preset("sum", 8, 8);  // 16.7M tuples
    CHECK_THROWS_AS(verify_symmetry(spec), std::length_error);
}

TEST_CASE("multiset classes: small cases") {
    const auto classes = enumerate_multiset_classes(make_preset("sum", 2, 2));
    REQUIRE(classes.size() == 3);
    std::set<std::vector<int>> counts;
    for (const auto& cls : classes) counts.insert(cls.counts);
    CHECK(counts == std::set<std::vector<int>>{{2, 0}, {1, 1}, {0, 2}});

    CHECK(enumerate_multiset_classes(make_preset("sum", 4, 8)).size() == 330);
    CHECK_THROWS_AS(enumerate_multiset_classes(difference_function(2)), NonSymmetricFunction);
}

TEST_CASE("class count identity and coverage") {
    for (auto [K, q] : {std::pair{2, 2}, std::pair{2, 4}, std::pair{3, 3}, std::pair{3, 4}, std::pair{4, 4}}) {
        const auto classes = enumerate_multiset_classes(make_preset("max", K, q));
        CHECK(classes.size() == binomial(K + q - 1, q - 1));
        // Classes partition the input space: multiplicities K!/prod(c_l!)
        // must add up to q^K.
        std::uint64_t covered = 0;
        for (const auto& cls : classes) {
            std::uint64_t mult = 1;
            int placed = 0;
            for (int c : cls.counts)
                for (int i = 1; i <= c; ++i) {
                    placed++;
                    mult = mult * static_cast<std::uint64_t>(placed) / static_cast<std::uint64_t>(i);
                }
            covered += mult;
        }
        CHECK(covered == input_space_size(K, q));
    }
}

TEST_CASE("class values are consistent with every member tuple") {
    const FunctionSpec spec = make_preset("product", 3, 4);
    const auto classes = enumerate_multiset_classes(spec);
    const std::uint64_t size = input_space_size(3, 4);
    std::map<std::vector<int>, double> valueOf;
    for (const auto& cls : classes) valueOf[cls.counts] = cls.value;
    for (std::uint64_t m = 0; m < size; ++m) {
        const auto tuple = index_to_tuple(m, 3, 4);
        std::vector<int> counts(4, 0);
        for (int level : tuple) counts[static_cast<std::size_t>(level)]++;
        CHECK(valueOf.at(counts) == doctest::Approx(spec.evaluator(tuple)).epsilon(1e-12));
    }
}

TEST_CASE("selection matrix structure") {
    const Eigen::MatrixXd A = build_selection_matrix(2, 2);
    REQUIRE(A.rows() == 4);
    REQUIRE(A.cols() == 4);
    // Tuple (0,1) sits at index 0 + 1*2 = 2.
    CHECK(A.row(2) == Eigen::RowVector4d(1, 0, 0, 1));

    // BPSK sums over the rows.
    Eigen::VectorXcd x(2);
    x << std::complex<double>(-1, 0), std::complex<double>(1, 0);
    Eigen::VectorXcd stacked(4);
    stacked << x, x;
    const Eigen::VectorXcd s = A.cast<std::complex<double>>() * stacked;
    CHECK(s(0).real() == doctest::Approx(-2));
    CHECK(s(1).real() == doctest::Approx(0));
    CHECK(s(2).real() == doctest::Approx(0));
    CHECK(s(3).real() == doctest::Approx(2));

    const Eigen::MatrixXd A34 = build_selection_matrix(3, 4);
    CHECK(A34.rows() == 64);
    CHECK(A34.cols() == 12);
    for (Eigen::Index r = 0; r < A34.rows(); ++r) CHECK(A34.row(r).sum() == doctest::Approx(3));
}

TEST_CASE("reduction soundness: class point equals selection-matrix point") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto [K, q] : {std::pair{2, 3}, std::pair{3, 4}, std::pair{4, 3}}) {
        const auto classes = enumerate_multiset_classes(make_preset("sum", K, q));
        const Eigen::MatrixXd A = build_selection_matrix(K, q);
        std::map<std::vector<int>, std::size_t> classOf;
        for (std::size_t c = 0; c < classes.size(); ++c) classOf[classes[c].counts] = c;
        for (int rep = 0; rep < 100; ++rep) {
            Eigen::VectorXcd x(q);
            for (int l = 0; l < q; ++l) x(l) = std::complex<double>(dist(gen), dist(gen));
            Eigen::VectorXcd stacked(static_cast<Eigen::Index>(K) * q);
            for (int k = 0; k < K; ++k) stacked.segment(static_cast<Eigen::Index>(k) * q, q) = x;
            const Eigen::VectorXcd s = A.cast<std::complex<double>>() * stacked;
            for (std::uint64_t m = 0; m < input_space_size(K, q); ++m) {
                const auto tuple = index_to_tuple(m, K, q);
                std::vector<int> counts(static_cast<std::size_t>(q), 0);
                for (int level : tuple) counts[static_cast<std::size_t>(level)]++;
                std::complex<double> viaCounts(0, 0);
                for (int l = 0; l < q; ++l)
                    viaCounts += static_cast<double>(counts[static_cast<std::size_t>(l)]) * x(l);
                CHECK(std::abs(viaCounts - s(static_cast<Eigen::Index>(m))) < 1e-12);
            }
        }
    }
}

TEST_CASE("range sets") {
    const RangeSet sum22 = range_set(make_preset("sum", 2, 2));
    CHECK(sum22.values == std::vector<double>{0, 1, 2});

    // Brute-force oracle: distinct products of pairs over levels {0,1,2,3}.
    const FunctionSpec prod = make_preset("product", 2, 4);
    std::set<double> oracle;
    for (std::uint64_t m = 0; m < input_space_size(2, 4); ++m)
        oracle.insert(prod.evaluator(index_to_tuple(m, 2, 4)));
    const RangeSet prodRange = range_set(prod);
    CHECK(prodRange.values == std::vector<double>(oracle.begin(), oracle.end()));
    CHECK(prodRange.values == std::vector<double>{0, 1, 2, 3, 4, 6, 9});
    CHECK(prodRange.cardinality() == 7);

    FunctionSpec constant;
    constant.K = 2;
    constant.q = 3;
    constant.name = "custom";
    constant.evaluator = [](const std::vector<int>&) { return 5.0; };
    const RangeSet constRange = range_set(constant);
    CHECK(constRange.values == std::vector<double>{5});
}

TEST_CASE("value table functions") {
    // Symmetric 2x2 table: f = x1 OR x2.
    FunctionSpec spec = make_table_function(2, 2, {0, 1, 1, 1});
    CHECK(verify_symmetry(spec));
    CHECK(spec.evaluator({0, 0}) == 0);
    CHECK(spec.evaluator({1, 0}) == 1);
    CHECK_THROWS_AS(make_table_function(2, 2, {0, 1, 1}), std::invalid_argument);
}

}  // TEST_SUITE
