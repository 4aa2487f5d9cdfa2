#include <doctest.h>

#include <mvdecomp/instancegen.hpp>

#include "support.hpp"

using namespace mvd;
using namespace testsup;

TEST_SUITE_BEGIN("instancegen");

TEST_CASE("rank-one spec") {
    InstanceSpec spec;
    spec.m = spec.n = spec.p = 2;
    spec.ranks = {1};
    spec.seed = 1;
    const auto inst = gen_instance<Rational>(spec);
    CHECK(inst.hidden.q() == 1);
    CHECK(inst.hidden.rank() == 1);
    CHECK(reconstruct(inst.hidden, 2, 2, 2) == inst.tensor);
}

TEST_CASE("generated instances satisfy every hypothesis by construction") {
    for (int i = 0; i < 100; ++i) {
        RandomEngine eng(7000 + i);
        InstanceSpec spec;
        spec.m = spec.n = static_cast<std::size_t>(bounded_int(eng, 5, 9));
        spec.p = static_cast<std::size_t>(bounded_int(eng, 2, 5));
        spec.ranks = random_ranks(eng, static_cast<std::size_t>(bounded_int(eng, 1, 3)),
                                  spec.m);
        spec.seed = static_cast<std::uint64_t>(i);
        const auto inst = gen_instance<Rational>(spec);

        std::size_t total = 0;
        std::vector<Subspace<Rational>> images, timages;
        for (std::size_t l = 0; l < inst.hidden.q(); ++l) {
            const auto& term = inst.hidden.terms()[l];
            CHECK(rank(term.M) == spec.ranks[l]);
            total += spec.ranks[l];
            images.push_back(image(term.M));
            timages.push_back(image(term.M.transpose()));
        }
        CHECK(inst.hidden.rank() == total);
        CHECK(direct_sum_check(images));
        CHECK(direct_sum_check(timages));
        for (std::size_t a = 0; a < inst.hidden.q(); ++a)
            for (std::size_t b = a + 1; b < inst.hidden.q(); ++b)
                CHECK_FALSE(colinear(inst.hidden.terms()[a].w,
                                     inst.hidden.terms()[b].w));
    }
}

TEST_CASE("spec validation") {
    InstanceSpec spec;
    spec.m = spec.n = 4;
    spec.p = 2;
    spec.ranks = {3, 2}; // sum 5 > 4
    CHECK_THROWS_AS(gen_instance<Rational>(spec), SpecInvalid);
    spec.ranks = {0};
    CHECK_THROWS_AS(gen_instance<Rational>(spec), SpecInvalid);
    spec.ranks = {1};
    spec.mode = "imaginary";
    CHECK_THROWS_AS(validate_spec(spec), SpecInvalid);
}

TEST_CASE("gen_minrank_basis") {
    InstanceSpec spec;
    spec.m = spec.n = 6;
    spec.p = 3;
    spec.ranks = {1, 2, 2};
    spec.seed = 11;
    const auto gen = gen_minrank_basis<Rational>(spec);

    // identity mixing returns the hidden basis itself
    const auto same = apply_change_of_basis(gen.hidden, Matrix<Rational>::identity(3));
    for (std::size_t i = 0; i < 3; ++i) CHECK(same[i] == gen.hidden[i]);

    // the visible basis spans the same space as the hidden one
    const auto vis = stack_vectorized(gen.basis);
    const auto hid = stack_vectorized(gen.hidden);
    CHECK(rank(vis) == 3);
    CHECK(rank(hid) == 3);
    CHECK(rank(Matrix<Rational>::vcat(vis, hid)) == 3);

    // mixing matrices are drawn invertible
    for (std::uint64_t s = 0; s < 5; ++s) {
        InstanceSpec sp = spec;
        sp.seed = 100 + s;
        const auto g = gen_minrank_basis<Rational>(sp);
        CHECK(rank(g.mixing) == sp.p);
        CHECK(rank(stack_vectorized(g.basis)) == sp.p);
    }

    InstanceSpec bad = spec;
    bad.ranks = {1, 2}; // q != p
    CHECK_THROWS_AS(gen_minrank_basis<Rational>(bad), SpecInvalid);
}

TEST_CASE("adversarial generators") {
    const auto shared = gen_shared_right_factor_basis<Rational>(5, 4, 3, 13);
    REQUIRE(shared.size() == 3);
    std::vector<Subspace<Rational>> images, timages;
    for (const auto& m : shared) {
        CHECK(rank(m) == 1);
        images.push_back(image(m));
        timages.push_back(image(m.transpose()));
    }
    CHECK(direct_sum_check(images));
    CHECK_FALSE(direct_sum_check(timages));

    const auto colin = gen_colinear_w_instance<Rational>(5, 5, 4, 3, 17);
    CHECK_FALSE(colin.tensor.is_zero());
}

TEST_CASE("equivalent: reflexivity, invariance, sensitivity") {
    InstanceSpec spec;
    spec.m = spec.n = 5;
    spec.p = 3;
    spec.ranks = {1, 2};
    spec.seed = 19;
    const auto inst = gen_instance<Rational>(spec);
    CHECK(equivalent(inst.hidden, inst.hidden));

    auto terms = inst.hidden.terms();
    std::swap(terms[0], terms[1]);
    for (auto& t : terms) {
        t.M = t.M.scaled(q(7, 2));
        for (auto& x : t.w) x = x * q(2, 7);
    }
    const MatrixVectorDecomposition<Rational> permuted(std::move(terms));
    CHECK(equivalent(inst.hidden, permuted));
    CHECK(equivalent(permuted, inst.hidden));

    auto broken = inst.hidden.terms();
    broken[0].M(0, 0) = broken[0].M(0, 0) + q(1);
    const MatrixVectorDecomposition<Rational> changed(std::move(broken));
    CHECK_FALSE(equivalent(inst.hidden, changed));

    // transitivity across three canonically-equal decompositions
    auto third = permuted.terms();
    std::swap(third[0], third[1]);
    const MatrixVectorDecomposition<Rational> third_d(std::move(third));
    CHECK(equivalent(inst.hidden, permuted));
    CHECK(equivalent(permuted, third_d));
    CHECK(equivalent(inst.hidden, third_d));
}

TEST_CASE("float equivalence matches by weight direction") {
    InstanceSpec spec;
    spec.m = spec.n = 5;
    spec.p = 3;
    spec.ranks = {1, 1};
    spec.seed = 23;
    spec.mode = "float";
    const auto inst = gen_instance<double>(spec);

    auto terms = inst.hidden.terms();
    std::swap(terms[0], terms[1]);
    for (auto& t : terms) {
        t.M = t.M.scaled(0.5);
        for (auto& x : t.w) x = x * 2.0;
    }
    const MatrixVectorDecomposition<double> permuted(std::move(terms));
    CHECK(equivalent(inst.hidden, permuted, 1e-9));

    auto broken = inst.hidden.terms();
    broken[0].M(0, 0) += 10.0;
    const MatrixVectorDecomposition<double> changed(std::move(broken));
    CHECK_FALSE(equivalent(inst.hidden, changed, 1e-9));
}

TEST_SUITE_END();
