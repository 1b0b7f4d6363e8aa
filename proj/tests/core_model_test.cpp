#include "budgetext/core_model.hpp"
#include "budgetext/random.hpp"

#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

namespace budgetext {
namespace {

TEST(AuctionInstance, RejectsInvalidInput)
{
  EXPECT_THROW(AuctionInstance({4.0}, {2.0}), InvalidInput);
  EXPECT_THROW(AuctionInstance({4.0, 1.0}, {2.0}), InvalidInput);
  EXPECT_THROW(AuctionInstance({4.0, 1.0}, {0.0, 1.0}), InvalidInput);
  EXPECT_THROW(AuctionInstance({4.0, 1.0}, {-1.0, 1.0}), InvalidInput);
  EXPECT_THROW(AuctionInstance({-0.5, 1.0}, {1.0, 1.0}), InvalidInput);
  EXPECT_NO_THROW(AuctionInstance({0.0, 0.0}, {1.0, 1.0}));
}

TEST(Allocation, RejectsOverAllocationInsteadOfClamping)
{
  EXPECT_THROW(Allocation({0.6, 0.6}), InvalidInput);
  EXPECT_THROW(Allocation({1.5, 0.0}), InvalidInput);
  EXPECT_THROW(Allocation({-0.1, 0.5}), InvalidInput);
  EXPECT_NO_THROW(Allocation({0.5, 0.5 + 5e-10}));
}

TEST(Budget, Examples)
{
  AuctionInstance const two({4.0, 1.0}, {2.0, 1.0});
  EXPECT_NEAR(budget(two, Allocation({1.0 / 3.0, 2.0 / 3.0}), 0), 4.0 / 3.0, 1e-15);
  EXPECT_EQ(budget(two, Allocation({0.7, 0.0}), 0), 0.0);

  AuctionInstance const three({3.0, 2.0, 1.0}, {1.0, 1.0, 1.0});
  Allocation const even({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(budget(three, even, i), 2.0 / 3.0, 1e-15);

  EXPECT_THROW(budget(two, even, 0), InvalidInput);
  EXPECT_THROW(budget(two, Allocation({0.5, 0.5}), 2), std::out_of_range);
}

TEST(Budget, IndependentOfOwnShare)
{
  AuctionInstance const inst({3.0, 2.0, 1.0}, {0.5, 2.0, 4.0});
  double const before = budget(inst, Allocation({0.1, 0.2, 0.3}), 1);
  double const after = budget(inst, Allocation({0.1, 0.6, 0.3}), 1);
  EXPECT_DOUBLE_EQ(before, after);
}

TEST(Utility, Examples)
{
  // n = 2 with alpha_1 = 1: x_2 = 1/2 gives B_1 = 0.5.
  AuctionInstance const inst({2.0, 1.0}, {1.0, 1.0});
  Outcome outcome{Allocation({0.5, 0.5}), {0.4, 0.0}, {}, 0.0};
  EXPECT_NEAR(utility(inst, outcome, 0, 2.0).amount(), 0.6, 1e-15);

  Outcome nothing{Allocation({0.0, 0.5}), {0.0, 0.0}, {}, 0.0};
  EXPECT_EQ(utility(inst, nothing, 0, 2.0).amount(), 0.0);

  Outcome overcharged{Allocation({0.5, 0.5}), {1.0, 0.0}, {}, 0.0};
  auto const u = utility(inst, overcharged, 0, 2.0);
  EXPECT_TRUE(u.is_budget_violated());
  EXPECT_THROW((void)u.amount(), std::logic_error);
}

TEST(Utility, BudgetViolationOrdersBelowEveryFiniteValue)
{
  auto const violated = Utility::budget_violated();
  EXPECT_TRUE(violated < Utility::finite(-1e300));
  EXPECT_FALSE(Utility::finite(-1e300) < violated);
  EXPECT_FALSE(violated < violated);
  EXPECT_TRUE(Utility::finite(1.0) < Utility::finite(2.0));
}

TEST(LiquidWelfare, Examples)
{
  AuctionInstance const two({4.0, 1.0}, {2.0, 1.0});
  EXPECT_NEAR(liquid_welfare(two, Allocation({1.0 / 3.0, 2.0 / 3.0})), 5.0 / 3.0, 1e-15);
  EXPECT_EQ(liquid_welfare(two, Allocation({0.0, 0.0})), 0.0);

  AuctionInstance const three({3.0, 2.0, 1.0}, {1.0, 1.0, 1.0});
  EXPECT_NEAR(liquid_welfare(three, Allocation({0.5, 0.5, 0.0})), 1.0, 1e-15);
}

// Random instances and random feasible allocations.
class LiquidWelfareProperties : public ::testing::TestWithParam<std::uint64_t>
{};

TEST_P(LiquidWelfareProperties, PermutationInvariantAndBounded)
{
  Rng rng(GetParam());
  for (int trial = 0; trial < 200; ++trial)
  {
    std::size_t const n = uniform_count(rng, 2, 6);
    auto const inst = random_instance(n, {0.0, 10.0}, {0.1, 10.0}, rng);
    std::vector<double> shares(n);
    for (auto &s : shares) s = uniform(rng, {0.0, 1.0});
    double const scale = uniform(rng, {0.0, 1.0}) / std::accumulate(shares.begin(), shares.end(), 0.0);
    for (auto &s : shares) s *= scale;
    Allocation const x(shares);
    double const lw = liquid_welfare(inst, x);

    EXPECT_LE(lw, welfare_ceiling(inst) + 1e-12);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> v(n), a(n), s(n);
    for (std::size_t i = 0; i < n; ++i)
    {
      v[i] = inst.value(perm[i]);
      a[i] = inst.alpha(perm[i]);
      s[i] = shares[perm[i]];
    }
    EXPECT_NEAR(liquid_welfare(AuctionInstance(v, a), Allocation(s)), lw, 1e-12);

    // Truthful utility within budget is plain value minus payment.
    std::size_t const i = uniform_count(rng, 0, n - 1);
    double const b = budget(inst, x, i);
    Outcome outcome{x, std::vector<double>(n, 0.0), {}, lw};
    outcome.payments[i] = 0.5 * b;
    EXPECT_EQ(utility(inst, outcome, i, inst.value(i)).amount(), inst.value(i) * x[i] - 0.5 * b);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, LiquidWelfareProperties, ::testing::Values(1u, 2u, 3u));

}  // namespace
}  // namespace budgetext
