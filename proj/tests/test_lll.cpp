#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "ellipse_lab/lll.hpp"
#include "properties.hpp"

using namespace ellipse_lab;
using namespace ellipse_lab::testing;

namespace {

IntMatrix mat(std::initializer_list<std::initializer_list<long>> rows) {
    IntMatrix m;
    for (auto& r : rows) {
        m.emplace_back();
        for (long v : r) m.back().push_back(Integer(v));
    }
    return m;
}

}  // namespace

TEST(Lll, IdentityIsAlreadyReduced) {
    auto id = mat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    EXPECT_EQ(lll_reduce(id), id);
}

TEST(Lll, TwoByTwoHandExample) {
    auto out = lll_reduce(mat({{1, 1}, {2, 0}}));
    ASSERT_EQ(out.size(), 2u);
    auto same_up_to_sign = [](const std::vector<Integer>& a, const std::vector<Integer>& b) {
        return a == b || (a[0] == -b[0] && a[1] == -b[1]);
    };
    EXPECT_TRUE(same_up_to_sign(out[0], {Integer(1), Integer(1)}));
    EXPECT_TRUE(same_up_to_sign(out[1], {Integer(1), Integer(-1)}));
    EXPECT_TRUE(is_lll_reduced(out));
}

TEST(Lll, FirstVectorBound) {
    auto in = mat({{201, 37}, {1648, 297}});
    auto out = lll_reduce(in);
    const Rational det = gram_det(in);  // squared lattice determinant
    EXPECT_EQ(gram_det(out), det);
    // |b1|^2 <= 2 det, and b1 is within 2^(1/2) of the shortest vector
    EXPECT_LE(Rational(norm2(out[0])), 2 * abs(Rational(sqrt(numerator(det)))) + 2);
    long double best = 1e300L;
    for (long i = -50; i <= 50; ++i)
        for (long j = -50; j <= 50; ++j) {
            if (i == 0 && j == 0) continue;
            long double x = 201.0L * i + 1648.0L * j, y = 37.0L * i + 297.0L * j;
            best = std::min(best, x * x + y * y);
        }
    EXPECT_LE(static_cast<long double>(norm2(out[0])), 2 * best);
}

TEST(Lll, RejectsDependentRowsAndBadDelta) {
    EXPECT_THROW(lll_reduce(mat({{1, 2, 3}, {2, 4, 6}})), DependentRowsError);
    EXPECT_THROW(lll_reduce(mat({{1, 0}, {0, 1}, {1, 1}})), DependentRowsError);
    EXPECT_THROW(lll_reduce(mat({{1, 0}, {0, 1}}), Rational(1, 4)), DomainError);
    EXPECT_THROW(lll_reduce(mat({{1, 0}, {0, 1}}), Rational(5, 4)), DomainError);
}

TEST(Lll, DeterministicAndDeltaOne) {
    std::mt19937 rng(5);
    auto m = random_lattice(rng, 4, 4);
    EXPECT_EQ(lll_reduce(m), lll_reduce(m));
    auto strict = lll_reduce(m, Rational(1));
    EXPECT_TRUE(is_lll_reduced(strict, Rational(1)));
    EXPECT_EQ(gram_det(strict), gram_det(m));
}

TEST(Lll, RandomLatticesAreReduced) {
    std::mt19937 rng(17);
    for (int t = 0; t < 100; ++t) EXPECT_EQ(check_random_lll(rng), "") << "trial " << t;
}

TEST(Lll, SquareDeterminantPreservedUpToEight) {
    std::mt19937 rng(23);
    std::uniform_int_distribution<long> u(-50, 50);
    for (std::size_t n = 2; n <= 8; ++n) {
        IntMatrix m = random_lattice(rng, n, n);
        for (auto& r : m)
            for (auto& v : r) v = u(rng);
        if (gram_det(m) == 0) continue;
        EXPECT_EQ(gram_det(lll_reduce(m)), gram_det(m)) << n;
    }
}
