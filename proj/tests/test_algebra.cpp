#include <gtest/gtest.h>

#include "support.hpp"

using namespace nilsplit;
using nilsplit::testing::random_homogeneous;

namespace {

GeneratorsPtr mixed_generators() {
  // Base-like even/odd generators followed by degree-1 fiber generators.
  return make_generators({{"a", 2}, {"b", 3}, {"x1", 1}, {"x2", 1}, {"x3", 1}, {"x4", 1}});
}

}  // namespace

TEST(Multiply, NormalFormBaseCase) {
  auto g = mixed_generators();
  auto x1x2 = Element::named(g, {"x1"}) * Element::named(g, {"x2"});
  ASSERT_EQ(x1x2.size(), 1u);
  EXPECT_EQ(x1x2.to_string(), "x1*x2");
}

TEST(Multiply, OddGeneratorsAnticommute) {
  auto g = mixed_generators();
  EXPECT_EQ(Element::named(g, {"x2"}) * Element::named(g, {"x1"}), -Element::named(g, {"x1", "x2"}));
}

TEST(Multiply, OddSquareVanishes) {
  auto g = mixed_generators();
  EXPECT_TRUE((Element::named(g, {"x1"}) * Element::named(g, {"x1"})).is_zero());
  EXPECT_TRUE((Element::named(g, {"b"}) * Element::named(g, {"b"})).is_zero());
}

TEST(Multiply, EvenGeneratorIsCentral) {
  auto g = mixed_generators();
  auto a = Element::named(g, {"a"});
  auto x1 = Element::named(g, {"x1"});
  EXPECT_EQ(a * x1, x1 * a);
  EXPECT_EQ((a * x1).to_string(), "a*x1");
  EXPECT_EQ((a * a).to_string(), "a^2");
}

TEST(Multiply, MismatchedGeneratorSetsAreRejected) {
  auto g = mixed_generators();
  auto h = make_generators({{"y", 1}});
  EXPECT_THROW(Element::generator(g, 0) * Element::generator(h, 0), StructureError);
  EXPECT_THROW(Element::generator(g, 0) + Element::generator(h, 0), StructureError);
}

TEST(Multiply, EqualContentGeneratorSetsInteroperate) {
  auto g = mixed_generators();
  auto h = mixed_generators();
  EXPECT_EQ(Element::generator(g, 2) * Element::generator(h, 3), Element::named(g, {"x1", "x2"}));
}

TEST(GeneratorSet, RejectsBadGenerators) {
  EXPECT_THROW(make_generators({{"x", 0}}), StructureError);
  EXPECT_THROW(make_generators({{"x", 1}, {"x", 2}}), StructureError);
}

TEST(ExtendDerivation, SingleTwistOnProduct) {
  auto g = make_generators({{"a", 2}, {"x1", 1}, {"x2", 1}});
  std::vector<Element> images{Element(g), Element::named(g, {"a"}), Element(g)};
  auto d = extend_derivation(images, Element::named(g, {"x1", "x2"}));
  EXPECT_EQ(d, Element::named(g, {"a", "x2"}));
}

TEST(ExtendDerivation, ZeroImagesGiveZero) {
  auto g = mixed_generators();
  std::vector<Element> images(g->size(), Element(g));
  std::mt19937_64 rng(3);
  for (int k = 0; k < 7; ++k) EXPECT_TRUE(extend_derivation(images, random_homogeneous(g, k, rng)).is_zero());
}

TEST(ExtendDerivation, SphereModelLeibniz) {
  auto g = make_generators({{"a", 2}, {"b", 3}});
  std::vector<Element> images{Element(g), Element::named(g, {"a", "a"})};
  EXPECT_EQ(extend_derivation(images, Element::named(g, {"a", "b"})), power(Element::named(g, {"a"}), 3));
}

TEST(ExtendDerivation, RejectsWrongDegreeImage) {
  auto g = make_generators({{"a", 2}, {"x1", 1}});
  std::vector<Element> images{Element(g), Element::named(g, {"x1"})};
  EXPECT_THROW(extend_derivation(images, Element::named(g, {"x1"})), StructureError);
}

TEST(ExtendDerivation, PowerOfEvenGenerator) {
  auto g = make_generators({{"a", 2}, {"t", 3}});
  // D a = t, so D(a^3) = 3 a^2 t.
  std::vector<Element> images{Element::named(g, {"t"}), Element(g)};
  EXPECT_EQ(extend_derivation(images, power(Element::named(g, {"a"}), 3)), Element::named(g, {"a", "a", "t"}, 3));
}

TEST(Element, ComponentsAndDegrees) {
  auto g = mixed_generators();
  auto e = Element::named(g, {"a", "x1"}) + Element::named(g, {"x1", "x2"}, Rational(-1, 2));
  EXPECT_FALSE(e.is_homogeneous());
  EXPECT_EQ(e.degrees(), (std::set<int>{2, 3}));
  EXPECT_EQ(e.component(3), Element::named(g, {"a", "x1"}));
  EXPECT_EQ(e.component(2).degree(), 2);
  EXPECT_EQ((e - e).to_string(), "0");
}

TEST(Element, ToStringFormatsCoefficients) {
  auto g = mixed_generators();
  auto e = Element::named(g, {"x1", "x2"}) - Element::named(g, {"a", "x3"}, Rational(1, 2));
  EXPECT_EQ(e.to_string(), "-1/2*a*x3 + x1*x2");
}

// Random triples of homogeneous elements: associativity, graded commutativity, degree additivity.
TEST(AlgebraProperties, AssociativeAndGradedCommutative) {
  auto g = mixed_generators();
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> deg(0, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    const int p = deg(rng), q = deg(rng), r = deg(rng);
    auto u = random_homogeneous(g, p, rng), v = random_homogeneous(g, q, rng), w = random_homogeneous(g, r, rng);
    ASSERT_EQ((u * v) * w, u * (v * w)) << u.to_string() << " | " << v.to_string() << " | " << w.to_string();
    const Rational sign = (p * q) % 2 == 0 ? 1 : -1;
    ASSERT_EQ(u * v, sign * (v * u)) << u.to_string() << " | " << v.to_string();
    const auto uv = u * v;
    if (!uv.is_zero()) {
      ASSERT_EQ(uv.degree(), p + q);
    }
  }
}

TEST(AlgebraProperties, LeibnizRule) {
  auto g = mixed_generators();
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> deg(0, 5);
  for (int trial = 0; trial < 1000; ++trial) {
    // Random derivation: each generator goes to a random element of one degree higher.
    std::vector<Element> images;
    for (std::size_t i = 0; i < g->size(); ++i) images.push_back(random_homogeneous(g, g->degree(i) + 1, rng, 2));
    const int p = deg(rng), q = deg(rng);
    auto u = random_homogeneous(g, p, rng), v = random_homogeneous(g, q, rng);
    const Rational sign = p % 2 == 0 ? 1 : -1;
    ASSERT_EQ(extend_derivation(images, u * v),
              extend_derivation(images, u) * v + sign * (u * extend_derivation(images, v)));
  }
}

TEST(AlgebraProperties, NormalFormIsAFixedPoint) {
  auto g = mixed_generators();
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    auto e = random_homogeneous(g, trial % 8, rng, 4);
    ASSERT_EQ(renormalize(e), e);
    ASSERT_EQ(renormalize(renormalize(e)), e);
  }
}

TEST(Morphism, AppliesProductwise) {
  auto src = make_generators({{"a1", 2}, {"a2", 2}, {"x1", 1}, {"x2", 1}});
  auto dst = make_generators({{"a", 2}, {"b", 3}, {"x1", 1}, {"x2", 1}});
  std::vector<Element> images{Element(dst), Element::named(dst, {"a"}), Element::named(dst, {"x1"}),
                              Element::named(dst, {"x2"})};
  auto u = Element::named(src, {"a2", "x2", "x1"}) + Element::named(src, {"a1", "x1"});
  EXPECT_EQ(apply_morphism(u, images, dst), -Element::named(dst, {"a", "x1", "x2"}));
}
