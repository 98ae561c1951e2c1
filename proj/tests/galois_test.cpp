#include <gtest/gtest.h>

#include <random>

#include "affine/builtins.hpp"
#include "affine/galois.hpp"
#include "oracles.hpp"

namespace affine {
namespace {

using namespace builtins;

struct Instance {
  AlgebraRef g;
  AlgebraRef a;
  std::size_t n;
};

std::vector<Instance> small_instances() {
  return {{bool2(), bool2(), 0},       {bool2(), bool2(), 1},   {bool2(), bool2(), 2},
          {semilat2(), semilat2(), 1}, {semilat2(), semilat2(), 2}, {distlat2(), distlat2(), 2},
          {z2(), z2(), 2},             {z4(), z4(), 1},         {z4(), z2_in_z4(), 1},
          {z4(), z2_in_z4(), 2}};
}

GroundRef ground(const Instance& in) { return GroundInstance::build(free_algebra(in.g, in.n), in.a); }

std::string label(const Instance& in) { return in.g->name() + " over " + in.a->name() + " n=" + std::to_string(in.n); }

// Element of F(n) given by a term, located through its value table.
Elem elem(const FreeAlgebra& f, const std::string& text) {
  const auto& g = *f.generator_algebra();
  const auto t = parse_term(text, g.signature());
  std::vector<Elem> values;
  for (std::size_t x = 0; x < f.table_length(); ++x) {
    const auto d = oracle::digits(x, g.size(), f.arity());
    values.push_back(oracle::eval_term(g, t, std::vector<Elem>(d.begin(), d.end())));
  }
  return *f.find(values);
}

using oracle::c_oracle;
using oracle::point_of;
using oracle::v_oracle;

bool same_partition(const Partition& p, const std::vector<Elem>& labels) {
  return p == Partition::from_labels(labels);
}

AffineSubset subset_from_mask(const GroundInstance& gi, std::uint64_t mask) {
  AffineSubset s = AffineSubset::empty(gi);
  for (std::size_t i = 0; i < gi.num_points(); ++i)
    if (mask >> i & 1u) s.insert(i);
  return s;
}

Relation random_relation(std::size_t universe, std::mt19937& rng, std::size_t max_pairs) {
  std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(universe - 1));
  std::uniform_int_distribution<std::size_t> count(0, max_pairs);
  std::vector<std::pair<Elem, Elem>> ps;
  for (std::size_t k = count(rng); k > 0; --k) ps.emplace_back(pick(rng), pick(rng));
  return Relation(universe, ps);
}

template <typename F>
void expect_error(ErrorKind kind, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

TEST(COperator, Examples) {
  auto gi = ground({bool2(), bool2(), 1});
  EXPECT_TRUE(c_operator(*gi, AffineSubset::full(*gi)).is_identity());
  EXPECT_TRUE(c_operator(*gi, AffineSubset::empty(*gi)).is_total());

  auto sl = ground({semilat2(), semilat2(), 2});
  const std::vector<std::size_t> s{sl->encode(std::vector<Elem>{1, 0})};
  const auto theta = c_operator(*sl, AffineSubset::of(*sl, s));
  const auto& f = sl->free();
  EXPECT_EQ(theta.num_blocks(), 2u);
  EXPECT_TRUE(theta.related(elem(f, "x1"), elem(f, "meet(x0, x1)")));
  EXPECT_FALSE(theta.related(elem(f, "x0"), elem(f, "x1")));
}

TEST(COperator, MatchesWitnessOracleOnEverySubset) {
  for (const auto& in : small_instances()) {
    auto gi = ground(in);
    if (gi->num_points() > 9) continue;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << gi->num_points()); ++mask) {
      const auto s = subset_from_mask(*gi, mask);
      const auto theta = c_operator(*gi, s);
      EXPECT_TRUE(same_partition(theta, c_oracle(*gi, s.points()))) << label(in) << " mask " << mask;
      EXPECT_TRUE(oracle::compatible(*gi->free().algebra(), std::vector<Elem>(theta.encoding().begin(), theta.encoding().end())))
          << label(in);
    }
  }
}

TEST(COperator, UndefinedPointRaisesNotInVariety) {
  auto impl = std::make_shared<const FiniteAlgebra>(Signature({{"add", 2}, {"neg", 1}, {"zero", 0}}), 2,
                                                    std::vector<std::vector<Elem>>{{1, 1, 0, 1}, {0, 1}, {1}}, "impl2");
  auto gi = GroundInstance::build(free_algebra(z2(), 2), impl);
  std::size_t bad = 0;
  while (gi->defined_at(bad)) ++bad;
  const std::vector<std::size_t> s{bad};
  expect_error(ErrorKind::not_in_variety, [&] { c_operator(*gi, AffineSubset::of(*gi, s)); });
  expect_error(ErrorKind::not_in_variety, [&] { v_operator(*gi, Relation(gi->free().size(), {})); });
}

TEST(VOperator, Examples) {
  auto gi = ground({bool2(), bool2(), 1});
  const auto& f = gi->free();
  EXPECT_TRUE(v_operator(*gi, Relation(f.size(), {{elem(f, "x0"), elem(f, "not(x0)")}})).empty());
  EXPECT_EQ(v_operator(*gi, Relation(f.size(), {{elem(f, "x0"), elem(f, "and(x0, x0)")}})).count(), 2u);
  EXPECT_EQ(v_operator(*gi, Relation(f.size(), {})), AffineSubset::full(*gi));

  auto z = ground({z4(), z4(), 1});
  const auto& fz = z->free();
  const auto v = v_operator(*z, Relation(fz.size(), {{elem(fz, "x0"), elem(fz, "neg(x0)")}}));
  EXPECT_EQ(v.points(), (std::vector<std::size_t>{0, 2}));
}

TEST(VOperator, MatchesWitnessOracleOnRandomRelations) {
  std::mt19937 rng(7);
  for (const auto& in : small_instances()) {
    auto gi = ground(in);
    if (gi->free().size() == 0) continue;
    for (int k = 0; k < 40; ++k) {
      const auto r = random_relation(gi->free().size(), rng, 4);
      EXPECT_EQ(v_operator(*gi, r).points(), v_oracle(*gi, r.pairs)) << label(in);
      EXPECT_EQ(v_operator(*gi, r), v_operator(*gi, r.closure())) << label(in);
    }
  }
}

TEST(ZariskiClosure, Examples) {
  auto gi = ground({bool2(), bool2(), 2});
  const std::vector<std::size_t> origin{0};
  EXPECT_EQ(zariski_closure(*gi, AffineSubset::of(*gi, origin)).points(), origin);
  EXPECT_EQ(zariski_closure(*gi, AffineSubset::full(*gi)), AffineSubset::full(*gi));

  auto sl = ground({semilat2(), semilat2(), 1});
  EXPECT_EQ(zariski_closure(*sl, AffineSubset::empty(*sl)).points(), (std::vector<std::size_t>{0, 1}));
}

TEST(GaloisLaws, HoldOnSmallInstances) {
  std::mt19937 rng(11);
  for (const auto& in : small_instances()) {
    auto gi = ground(in);
    const std::size_t m = gi->num_points();
    if (m > 9) continue;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      const auto s = subset_from_mask(*gi, mask);
      const auto cs = c_operator(*gi, s);
      const auto vcs = v_operator(*gi, cs);
      EXPECT_TRUE(s.is_subset_of(vcs)) << label(in);
      EXPECT_EQ(vcs, zariski_closure(*gi, vcs)) << label(in);
      EXPECT_EQ(c_operator(*gi, vcs), cs) << label(in);
      for (std::size_t extra = 0; extra < m; ++extra) {
        AffineSubset bigger = s;
        bigger.insert(extra);
        EXPECT_TRUE(c_operator(*gi, bigger).refines(cs)) << label(in);
      }
    }
    if (gi->free().size() == 0) continue;
    for (int k = 0; k < 40; ++k) {
      const auto r = random_relation(gi->free().size(), rng, 3);
      auto bigger_pairs = r.pairs;
      const auto more = random_relation(gi->free().size(), rng, 3);
      bigger_pairs.insert(bigger_pairs.end(), more.pairs.begin(), more.pairs.end());
      const Relation bigger(gi->free().size(), bigger_pairs);
      ASSERT_TRUE(r.subset_of(bigger));
      const auto vr = v_operator(*gi, r);
      EXPECT_TRUE(v_operator(*gi, bigger).is_subset_of(vr)) << label(in);
      const auto cvr = c_operator(*gi, vr);
      EXPECT_TRUE(r.within(cvr)) << label(in);
      EXPECT_EQ(v_operator(*gi, cvr), vr) << label(in);
    }
  }
}

TEST(Radical, Examples) {
  auto gi = ground({bool2(), bool2(), 1});
  const auto n = gi->free().size();
  EXPECT_TRUE(radical(*gi, Relation::identity(n)).is_identity());
  const auto& f = gi->free();
  EXPECT_TRUE(radical(*gi, Relation(n, {{elem(f, "x0"), elem(f, "not(x0)")}})).is_total());

  auto sub = ground({z4(), z2_in_z4(), 1});
  const auto& fz = sub->free();
  const auto rad = radical(*sub, Relation::identity(fz.size()));
  EXPECT_EQ(rad.num_blocks(), 2u);
  EXPECT_TRUE(rad.related(elem(fz, "x0"), elem(fz, "neg(x0)")));
  EXPECT_TRUE(rad.related(elem(fz, "add(x0, x0)"), elem(fz, "zero")));
  EXPECT_FALSE(rad.related(elem(fz, "x0"), elem(fz, "zero")));
}

TEST(Radical, ContainsThetaIsIdempotentAndMatchesClosureOfSupport) {
  for (const auto& in : small_instances()) {
    auto gi = ground(in);
    for (const auto& theta : congruence_lattice(*gi->free().algebra())) {
      const auto rad = radical(*gi, theta);
      EXPECT_TRUE(theta.refines(rad)) << label(in);
      EXPECT_EQ(radical(*gi, rad), rad) << label(in);
      EXPECT_EQ(rad, c_operator(*gi, v_operator(*gi, theta))) << label(in);
      EXPECT_EQ(rad, radical(*gi, Relation::of(theta))) << label(in);
    }
  }
}

TEST(Gelfand, BooleanUnaryAtOne) {
  auto gi = ground({bool2(), bool2(), 1});
  const auto& f = gi->free();
  const auto g = gelfand_evaluation(*gi, 1);
  ASSERT_EQ(g.quotient.algebra->size(), 2u);
  EXPECT_EQ(g.gamma(g.quotient.projection(elem(f, "x0"))), 1u);
  EXPECT_EQ(g.gamma(g.quotient.projection(elem(f, "one"))), 1u);
  EXPECT_EQ(g.gamma(g.quotient.projection(elem(f, "not(x0)"))), 0u);
  EXPECT_EQ(g.gamma(g.quotient.projection(elem(f, "zero"))), 0u);
  EXPECT_TRUE(is_injective(g.gamma.map, 2));
}

TEST(Gelfand, BooleanBinaryAtZeroOne) {
  auto gi = ground({bool2(), bool2(), 2});
  const auto g = gelfand_evaluation(*gi, gi->encode(std::vector<Elem>{0, 1}));
  EXPECT_EQ(g.quotient.algebra->size(), 2u);
  EXPECT_TRUE(is_injective(g.gamma.map, 2));
}

TEST(Gelfand, InjectiveHomomorphismFactoringEvaluationEverywhere) {
  for (const auto& in : small_instances()) {
    auto gi = ground(in);
    for (std::size_t a = 0; a < gi->num_points(); ++a) {
      const auto g = gelfand_evaluation(*gi, a);
      EXPECT_TRUE(is_homomorphism(g.gamma)) << label(in);
      EXPECT_TRUE(is_injective(g.gamma.map, gi->ground()->size())) << label(in);
      for (Elem p = 0; p < gi->free().size(); ++p)
        EXPECT_EQ(g.gamma(g.quotient.projection(p)),
                  oracle::eval_term(*gi->ground(), gi->free().element(p).witness, point_of(*gi, a)));
    }
  }
}

TEST(SgkInverse, RoundTripsEveryPoint) {
  for (const auto& in : small_instances()) {
    auto gi = ground(in);
    for (std::size_t a = 0; a < gi->num_points(); ++a) {
      const auto p = PresentedAlgebra::make(gi->free_ref(), point_kernel(*gi, a));
      const auto g = gelfand_evaluation(*gi, a);
      Homomorphism e{p.quotient().algebra, gi->ground(), g.gamma.map};
      const auto b = sgk_inverse(*gi, p, e);
      EXPECT_EQ(point_kernel(*gi, b), p.theta) << label(in);
      // Points sharing a kernel are told apart only by e; a = b when n > 0.
      if (in.n > 0) {
        EXPECT_EQ(b, a) << label(in);
      }
    }
  }
}

TEST(SgkInverse, RejectsNonInjective) {
  auto gi = ground({bool2(), bool2(), 1});
  const auto p = PresentedAlgebra::make(gi->free_ref(), Partition::identity(gi->free().size()));
  const auto ev = gi->eval(1);
  Homomorphism e{p.quotient().algebra, gi->ground(), std::vector<Elem>(ev.begin(), ev.end())};
  expect_error(ErrorKind::not_injective, [&] { sgk_inverse(*gi, p, e); });
}

TEST(PresentedAlgebra, RejectsNonCongruence) {
  auto gi = ground({bool2(), bool2(), 1});
  const auto& f = gi->free();
  const std::vector<std::pair<Elem, Elem>> one_pair{{elem(f, "x0"), elem(f, "zero")}};
  expect_error(ErrorKind::not_a_congruence,
               [&] { PresentedAlgebra::make(gi->free_ref(), Partition::generated_by(f.size(), one_pair)); });
}

TEST(Birkhoff, BooleanIdentityIsSubdirect) {
  auto gi = ground({bool2(), bool2(), 1});
  const auto p = PresentedAlgebra::make(gi->free_ref(), Partition::identity(4));
  const auto bt = birkhoff_transform(*gi, p);
  ASSERT_EQ(bt.factors.size(), 2u);
  EXPECT_EQ(bt.factors[0].quotient.algebra->size(), 2u);
  EXPECT_EQ(bt.factors[1].quotient.algebra->size(), 2u);
  EXPECT_TRUE(bt.sigma_injective);
  EXPECT_TRUE(bt.subdirect());
  ASSERT_TRUE(bt.sigma && bt.iota);
  EXPECT_TRUE(is_homomorphism(*bt.sigma));
  EXPECT_TRUE(is_homomorphism(*bt.iota));
  const auto factors = bt.factor_algebras();
  EXPECT_TRUE(is_subdirect_embedding(*bt.sigma, factors).subdirect());
  EXPECT_TRUE(is_injective(bt.iota->map, bt.iota->target->size()));
}

TEST(Birkhoff, SubgroupGroundIdentityIsNotInjective) {
  auto gi = ground({z4(), z2_in_z4(), 1});
  const auto p = PresentedAlgebra::make(gi->free_ref(), Partition::identity(4));
  const auto bt = birkhoff_transform(*gi, p);
  ASSERT_EQ(bt.factors.size(), 2u);
  EXPECT_EQ(bt.factors[0].quotient.algebra->size(), 1u);
  EXPECT_EQ(bt.factors[1].quotient.algebra->size(), 2u);
  EXPECT_FALSE(bt.sigma_injective);
  EXPECT_TRUE(bt.sigma_onto_each_factor);
  EXPECT_TRUE(bt.iota_injective);
}

TEST(Birkhoff, PointKernelIsIsomorphicToItsFactor) {
  auto gi = ground({bool2(), bool2(), 2});
  const auto p = PresentedAlgebra::make(gi->free_ref(), point_kernel(*gi, 2));
  const auto bt = birkhoff_transform(*gi, p);
  ASSERT_EQ(bt.support, (std::vector<std::size_t>{2}));
  ASSERT_TRUE(bt.sigma);
  EXPECT_TRUE(is_injective(bt.sigma->map, bt.sigma->target->size()));
  EXPECT_TRUE(is_surjective(bt.sigma->map, bt.sigma->target->size()));
}

TEST(Birkhoff, EmptySupportGivesOneElementProduct) {
  auto gi = ground({bool2(), bool2(), 1});
  const auto p = PresentedAlgebra::make(gi->free_ref(), Partition::total(4));
  const auto bt = birkhoff_transform(*gi, p);
  EXPECT_TRUE(bt.support.empty());
  ASSERT_TRUE(bt.sigma);
  EXPECT_EQ(bt.sigma->target->size(), 1u);
  EXPECT_EQ(bt.iota->target->size(), 1u);
  EXPECT_TRUE(bt.subdirect());
}

TEST(Birkhoff, IotaInjectiveAndProjectionsOntoForEveryCongruence) {
  for (const auto& in : small_instances()) {
    auto gi = ground(in);
    for (const auto& theta : congruence_lattice(*gi->free().algebra())) {
      const auto bt = birkhoff_transform(*gi, PresentedAlgebra::make(gi->free_ref(), theta));
      EXPECT_TRUE(bt.iota_injective) << label(in);
      EXPECT_TRUE(bt.sigma_onto_each_factor) << label(in);
      if (bt.sigma) {
        EXPECT_TRUE(is_homomorphism(*bt.sigma));
        EXPECT_TRUE(is_homomorphism(*bt.iota));
        EXPECT_EQ(is_subdirect_embedding(*bt.sigma, bt.factor_algebras()).subdirect(), bt.subdirect());
        EXPECT_TRUE(is_injective(bt.iota->map, bt.iota->target->size()));
      }
    }
  }
}

TEST(Birkhoff, MaterializationRespectsBudget) {
  auto gi = ground({bool2(), bool2(), 2});
  const auto p = PresentedAlgebra::make(gi->free_ref(), Partition::identity(16));
  const auto bt = birkhoff_transform(*gi, p, Budget{100});
  EXPECT_FALSE(bt.sigma.has_value());
  EXPECT_TRUE(bt.subdirect());
}

TEST(Nullstellensatz, BooleanBinaryEveryCongruenceFixed) {
  auto gi = ground({bool2(), bool2(), 2});
  const auto lattice = congruence_lattice(*gi->free().algebra());
  EXPECT_EQ(lattice.size(), 16u);
  for (const auto& theta : lattice) {
    const auto v = nullstellensatz_check(*gi, PresentedAlgebra::make(gi->free_ref(), theta));
    EXPECT_TRUE(v.fixed && v.radical_equal && v.subdirect);
  }
}

TEST(Nullstellensatz, SubgroupGroundIdentityNotFixed) {
  auto gi = ground({z4(), z2_in_z4(), 1});
  const auto v = nullstellensatz_check(*gi, PresentedAlgebra::make(gi->free_ref(), Partition::identity(4)));
  EXPECT_FALSE(v.fixed);
  EXPECT_FALSE(v.radical_equal);
  EXPECT_FALSE(v.subdirect);
  EXPECT_EQ(v.radical.num_blocks(), 2u);
}

TEST(Nullstellensatz, ClosedCongruencesAreFixed) {
  for (const auto& in : small_instances()) {
    auto gi = ground(in);
    if (gi->num_points() > 9) continue;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << gi->num_points()); ++mask) {
      const auto theta = c_operator(*gi, subset_from_mask(*gi, mask));
      EXPECT_TRUE(nullstellensatz_check(*gi, PresentedAlgebra::make(gi->free_ref(), theta)).fixed) << label(in);
    }
  }
}

TEST(Nullstellensatz, AgreesWithOracleAcrossAllCongruences) {
  for (const auto& in : small_instances()) {
    auto gi = ground(in);
    for (const auto& theta : congruence_lattice(*gi->free().algebra())) {
      const auto v = nullstellensatz_check(*gi, PresentedAlgebra::make(gi->free_ref(), theta));
      std::vector<std::pair<Elem, Elem>> pairs;
      for (Elem p = 0; p < theta.size(); ++p) pairs.emplace_back(p, theta.representatives()[theta.block_of(p)]);
      const bool expected = same_partition(theta, c_oracle(*gi, v_oracle(*gi, pairs)));
      EXPECT_EQ(v.fixed, expected) << label(in);
    }
  }
}

TEST(Zariski, BooleanPlaneIsDiscrete) {
  const auto r = zariski_report(bool2(), bool2(), 2);
  EXPECT_EQ(r.closed_sets.size(), 16u);
  EXPECT_TRUE(r.is_topology);
  EXPECT_TRUE(r.union_closed);
  EXPECT_TRUE(r.matches_discrete);
}

TEST(Zariski, SemilatticeLineHasOnlyTheFullSpace) {
  const auto r = zariski_report(semilat2(), semilat2(), 1);
  ASSERT_EQ(r.closed_sets.size(), 1u);
  EXPECT_EQ(r.closed_sets[0].points(), (std::vector<std::size_t>{0, 1}));
  EXPECT_FALSE(r.has_empty);
  EXPECT_FALSE(r.is_topology);
}

TEST(Zariski, ZeroAritySpaceHasOnePoint) {
  const auto b = zariski_report(bool2(), bool2(), 0);
  ASSERT_EQ(b.closed_sets.size(), 2u);
  EXPECT_TRUE(b.closed_sets[0].empty());
  EXPECT_EQ(b.closed_sets[1].ambient_size(), 1u);
  EXPECT_TRUE(b.matches_discrete);
  const auto s = zariski_report(semilat2(), semilat2(), 0);
  ASSERT_EQ(s.closed_sets.size(), 1u);
  EXPECT_EQ(s.closed_sets[0].count(), 1u);
}

TEST(Zariski, PowerSetAndCongruenceScansAgree) {
  for (const auto& in : small_instances()) {
    auto gi = ground(in);
    EXPECT_EQ(closed_sets_by_power_set(*gi), closed_sets_by_congruences(*gi)) << label(in);
  }
}

TEST(Zariski, LargerSpacesUseCongruenceScan) {
  const auto r = zariski_report(z4(), z4(), 2);
  EXPECT_EQ(r.method, "power_set");
  const auto cube = zariski_report(bool2(), bool2(), 3);
  EXPECT_EQ(cube.closed_sets.size(), 256u);
  EXPECT_TRUE(cube.matches_discrete);
  // Closed sets of Z2^5 are its linear subspaces: 1+31+155+155+31+1.
  const auto big = zariski_report(z2(), z2(), 5);
  EXPECT_EQ(big.method, "congruence_lattice");
  EXPECT_EQ(big.closed_sets.size(), 374u);
  EXPECT_FALSE(big.union_closed);
  EXPECT_TRUE(big.intersection_closed);
}

TEST(Zariski, PowerSetBudget) {
  auto gi = ground({z4(), z4(), 2});
  expect_error(ErrorKind::budget_exceeded, [&] { closed_sets_by_power_set(*gi, Budget{1000}); });
}

}  // namespace
}  // namespace affine
