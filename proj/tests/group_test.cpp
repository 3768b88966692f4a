#include "doctest.h"
#include "snakelab/errors.hpp"
#include "snakelab/group.hpp"

using namespace snakelab;

TEST_CASE("cycle notation parses and composes left-to-right") {
  Permutation p01 = parse_cycles("(0 1)", 3);
  Permutation p12 = parse_cycles("(1 2)", 3);
  // compose(a, b) applies b first: (0 1)(1 2) maps 1->2->... as a 3-cycle.
  CHECK(format_cycles(compose(p01, p12)) == "(0 1 2)");
  CHECK(format_cycles(compose(p12, p01)) == "(0 2 1)");
  CHECK(format_cycles(parse_cycles("()", 4)) == "()");
  CHECK(compose(p01, invert_permutation(p01)) == parse_cycles("()", 3));

  Permutation two_cycles = parse_cycles("(0 1 2)(3 4)", 5);
  CHECK(parse_cycles(format_cycles(two_cycles), 5) == two_cycles);
}

TEST_CASE("group orders match their specs") {
  CHECK(FiniteGroup::build(GroupSpec::parse("cyclic(6)"))->order() == 6);
  CHECK(FiniteGroup::build(GroupSpec::parse("symmetric(4)"))->order() == 24);
  CHECK(FiniteGroup::build(GroupSpec::parse("power(cyclic(2),3)"))->order() == 8);
  // A 3-cycle generates the alternating group on 3 points.
  CHECK(FiniteGroup::build(GroupSpec::closure(3, {parse_cycles("(0 1 2)", 3)}))->order() == 3);
  // A transposition plus a 3-cycle generate all of S_3.
  CHECK(FiniteGroup::build(
            GroupSpec::closure(3, {parse_cycles("(0 1)", 3), parse_cycles("(0 1 2)", 3)}))
            ->order() == 6);
}

TEST_CASE("identity is id 0 and inverses multiply to it") {
  auto s4 = FiniteGroup::build(GroupSpec::symmetric(4));
  CHECK(s4->identity() == 0);
  CHECK(format_cycles(s4->permutation_of(0)) == "()");
  for (Element g = 0; g < s4->order(); ++g) {
    CHECK(s4->multiply(g, s4->invert(g)) == 0);
    CHECK(s4->multiply(0, g) == g);
    CHECK(s4->multiply(g, 0) == g);
  }
}

TEST_CASE("permutation lookups round-trip") {
  auto s4 = FiniteGroup::build(GroupSpec::symmetric(4));
  REQUIRE(s4->has_permutations());
  for (Element g = 0; g < s4->order(); ++g) {
    auto found = s4->find_permutation(s4->permutation_of(g));
    REQUIRE(found.has_value());
    CHECK(*found == g);
  }
  CHECK_FALSE(s4->find_permutation(parse_cycles("(0 1 2 3 4)", 5)).has_value());
}

TEST_CASE("power groups use mixed radix with coordinate 0 least significant") {
  auto z4sq = FiniteGroup::build(GroupSpec::power(GroupSpec::cyclic(4), 2));
  REQUIRE(z4sq->order() == 16);
  // id 1 = (1,0), id 4 = (0,1); their product is (1,1) = id 5.
  CHECK(z4sq->multiply(1, 4) == 5);
  CHECK(z4sq->multiply(3, 1) == 0);   // (3,0)+(1,0) wraps coordinate 0
  CHECK(z4sq->invert(5) == 15);       // -(1,1) = (3,3)
}

TEST_CASE("translations agree with multiplication") {
  auto s3 = FiniteGroup::build(GroupSpec::symmetric(3));
  for (Element g = 0; g < s3->order(); ++g) {
    std::vector<Element> left = s3->left_translation(g);
    std::vector<Element> right = s3->right_translation(g);
    for (Element v = 0; v < s3->order(); ++v) {
      CHECK(left[v] == s3->multiply(g, v));
      CHECK(right[v] == s3->multiply(v, g));
    }
  }
}

TEST_CASE("spec text round-trips") {
  for (const char* text : {"cyclic(8)", "symmetric(4)", "power(cyclic(2),6)",
                           "closure(3: (0 1 2); (0 1))"}) {
    GroupSpec spec = GroupSpec::parse(text);
    CHECK(GroupSpec::parse(spec.to_string()).to_string() == spec.to_string());
  }
  CHECK_THROWS_AS(GroupSpec::parse("frobnicate(3)"), ValidationError);
  CHECK_THROWS_AS(FiniteGroup::build(GroupSpec::closure(3, {})), ValidationError);
}

TEST_CASE("order caps are enforced") {
  CHECK_THROWS_AS(FiniteGroup::build(GroupSpec::symmetric(4), 10), SizeLimitError);
}
