#include "bstab/exceptional.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bstab;

namespace {

ChernVector C(const char* s) { return parse_class(s); }

AlgebraicDatum datum(std::array<double, 4> phi) {
    AlgebraicDatum d;
    d.phi = phi;
    return d;
}

}  // namespace

TEST_CASE("Beilinson collection") {
    const ExcCollection b = beilinson(0);
    CHECK(b.classes[0] == C("1,0,0,0"));
    CHECK(b.classes[1] == C("1,1,1/2,1/6"));
    CHECK(b.classes[2] == C("1,2,2,4/3"));
    CHECK(b.classes[3] == C("1,3,9/2,9/2"));
    CHECK(check_exceptional(b));
    for (long k = -3; k <= 3; ++k) CHECK(check_exceptional(beilinson(k)));
}

TEST_CASE("non-exceptional quadruple") {
    ExcCollection c = beilinson(0);
    c.classes = {C("1,0,0,0"), C("1,0,0,0"), C("1,1,1/2,1/6"), C("1,2,2,4/3")};
    CHECK_FALSE(check_exceptional(c));
}

TEST_CASE("mutations") {
    const ExcCollection b = beilinson(0);
    const ExcCollection l = mutate(b, 1, Mutation::Left);
    // chi(O, O(1)) = 4 from (1 + 3 choose 3).
    CHECK(euler(b.classes[0], b.classes[1]) == testing::binom3(1));
    CHECK(l.classes[0] == b.classes[0] * Rational(4) - b.classes[1]);
    CHECK(l.classes[0] == C("3,-1,-1/2,-1/6"));
    CHECK(l.classes[1] == b.classes[0]);
    CHECK_THROWS_AS(mutate(b, 4, Mutation::Left), BadIndex);
    CHECK_THROWS_AS(mutate(b, 0, Mutation::Right), BadIndex);
    for (int i = 1; i <= 3; ++i) {
        for (Mutation m : {Mutation::Left, Mutation::Right}) CHECK(check_exceptional(mutate(b, i, m)));
        const ExcCollection back = mutate(mutate(b, i, Mutation::Left), i, Mutation::Right);
        CHECK(back.classes == b.classes);
        const ExcCollection back2 = mutate(mutate(b, i, Mutation::Right), i, Mutation::Left);
        CHECK(back2.classes == b.classes);
    }
}

TEST_CASE("mutation sequences stay exceptional") {
    testing::Gen g(71);
    ExcCollection c = beilinson(0);
    for (int step = 0; step < 12; ++step) {
        c = mutate(c, static_cast<int>(g.integer(1, 3)), g.integer(0, 1) ? Mutation::Left : Mutation::Right);
        CHECK(check_exceptional(c));
    }
}

TEST_CASE("theta membership") {
    const ThetaMembership a = theta_membership(datum({0, 1.5, 3.6, 6.1}));
    CHECK(a.in_theta);
    CHECK(a.in_theta_star);
    CHECK_FALSE(theta_membership(datum({0, 1, 2, 3})).in_theta);
    CHECK_FALSE(theta_membership(datum({0, 1.2, 2.9, 5.4})).in_theta);
    AlgebraicDatum neg = datum({0, 1.5, 3.6, 6.1});
    neg.m[2] = -1;
    CHECK_FALSE(theta_membership(neg).in_theta);
}

TEST_CASE("algebraic charge round trip") {
    const ExcCollection b = beilinson(0);
    const AlgebraicDatum d = datum({0.1, 1.2, 2.4, 3.7});
    const auto spec = algebraic_charge(b, d);
    CHECK(algebraic_residual(b, d, spec) <= 1e-10);
    testing::Gen g(72);
    for (int i = 0; i < 30; ++i) {
        AlgebraicDatum r;
        for (int k = 0; k < 4; ++k) {
            r.m[k] = g.real(0.1, 5);
            r.phi[k] = g.real(-2, 8);
        }
        const ExcCollection c = mutate(beilinson(g.integer(-2, 2)), static_cast<int>(g.integer(1, 3)), Mutation::Left);
        CHECK(algebraic_residual(c, r, algebraic_charge(c, r)) <= 1e-10);
    }
}

TEST_CASE("repeated classes are singular") {
    ExcCollection c = beilinson(0);
    c.classes[3] = c.classes[0];
    CHECK_THROWS_AS(algebraic_charge(c, datum({0, 1, 2, 3})), SingularBasis);
}
