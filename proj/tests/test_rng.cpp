#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "parafine/rng.hpp"

using parafine::Rng;

TEST_CASE("identical seeds reproduce identical streams") {
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds diverge") {
    Rng a(1);
    Rng b(2);
    int same = 0;
    for (int i = 0; i < 100; ++i) {
        if (a.next_u64() == b.next_u64()) ++same;
    }
    CHECK(same == 0);
}

TEST_CASE("uniform stays in the half-open unit interval") {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("below covers its range without bias artifacts") {
    Rng rng(3);
    std::vector<int> counts(10, 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++counts[rng.below(10)];
    for (const int c : counts) {
        CHECK(c > draws / 10 - 600);
        CHECK(c < draws / 10 + 600);
    }
}

TEST_CASE("normal has roughly standard moments") {
    Rng rng(11);
    const int n = 50000;
    double sum = 0.0;
    double sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("shuffle is a seeded permutation") {
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    std::vector<int> w = v;
    Rng a(5);
    Rng b(5);
    a.shuffle(v);
    b.shuffle(w);
    CHECK(v == w);
    CHECK(std::set<int>(v.begin(), v.end()).size() == 50);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expect(50);
    std::iota(expect.begin(), expect.end(), 0);
    CHECK(sorted == expect);
}

TEST_CASE("fork streams are independent of parent consumption order") {
    Rng parent(9);
    Rng c1 = parent.fork("weights");
    Rng c2 = parent.fork("bias");
    Rng parent2(9);
    Rng c2b = parent2.fork("bias");
    Rng c1b = parent2.fork("weights");
    for (int i = 0; i < 100; ++i) {
        CHECK(c1.next_u64() == c1b.next_u64());
        CHECK(c2.next_u64() == c2b.next_u64());
    }
}

TEST_CASE("fork labels separate streams") {
    Rng parent(9);
    Rng a = parent.fork("alpha");
    Rng b = parent.fork("beta");
    int same = 0;
    for (int i = 0; i < 100; ++i) {
        if (a.next_u64() == b.next_u64()) ++same;
    }
    CHECK(same == 0);
}

TEST_CASE("bernoulli tracks its probability") {
    Rng rng(13);
    int hits = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        if (rng.bernoulli(0.3)) ++hits;
    }
    CHECK(std::abs(hits / static_cast<double>(n) - 0.3) < 0.01);
}
