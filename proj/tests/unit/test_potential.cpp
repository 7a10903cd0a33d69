#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "resolab/errors.hpp"
#include "resolab/potential.hpp"

using namespace resolab;

namespace {

std::vector<Potential> fixtures() {
  return {Potential::zero(),
          Potential::square_well(2.0),
          Potential::square_well(-20.0),
          Potential::step({0.0, 0.5, 1.0}, {1.0, 3.0}),
          Potential::step({0.0, 0.2, 0.7, 1.0}, {-1.0, 4.0, 0.5}),
          Potential::piecewise_poly({0.0, 0.4, 1.0}, {{1.0, 2.0}, {0.0, -1.0, 3.0}}),
          Potential::grid({0.0, 1.0, 3.0, 2.0, 0.5, 0.0}, 0),
          Potential::grid({0.0, 1.0, 3.0, 2.0, 0.5, 0.0}, 1),
          Potential::grid({0.0, 1.0, 3.0, 2.0, 0.5, 0.0}, 3),
          Potential::bump(1, 2, 6.0),
          Potential::bump(0, 3, -2.5),
          splice(Potential::square_well(1.0), Potential::bump(2, 1, 4.0), 0.3)};
}

// n-th derivative by central differences of order n, step h.
double fd_derivative(const std::function<double(double)>& f, double x, int n, double h) {
  double acc = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= n; ++j) {
    acc += ((j % 2) ? -1.0 : 1.0) * binom * f(x + (n / 2.0 - j) * h);
    binom = binom * (n - j) / (j + 1);
  }
  return acc / std::pow(h, n);
}

}  // namespace

TEST(PotentialEvaluate, SquareWellInside) { EXPECT_EQ(evaluate(Potential::square_well(2.0), 0.5), 2.0); }

TEST(PotentialEvaluate, SquareWellOutsideSupport) {
  EXPECT_EQ(evaluate(Potential::square_well(2.0), 1.5), 0.0);
  EXPECT_EQ(evaluate(Potential::square_well(2.0), -1e-12), 0.0);
}

TEST(PotentialEvaluate, BumpDirectFormula) { EXPECT_DOUBLE_EQ(evaluate(Potential::bump(1, 2, 6.0), 0.5), 0.75); }

TEST(PotentialEvaluate, StepPieces) {
  const auto q = Potential::step({0.0, 0.5, 1.0}, {1.0, 3.0});
  EXPECT_EQ(q(0.25), 1.0);
  EXPECT_EQ(q(0.75), 3.0);
}

TEST(PotentialEvaluate, PiecewisePolyUsesLocalVariable) {
  const auto q = Potential::piecewise_poly({0.0, 0.4, 1.0}, {{1.0, 2.0}, {0.0, -1.0, 3.0}});
  EXPECT_DOUBLE_EQ(q(0.1), 1.0 + 2.0 * 0.1);
  const double t = 0.9 - 0.4;
  EXPECT_DOUBLE_EQ(q(0.9), -t + 3.0 * t * t);
}

TEST(PotentialEvaluate, GridInterpolationOrders) {
  const std::vector<double> v{0.0, 1.0, 3.0};
  EXPECT_EQ(Potential::grid(v, 0)(0.3), 1.0);
  EXPECT_DOUBLE_EQ(Potential::grid(v, 1)(0.25), 0.5);
  const auto cubic = Potential::grid(v, 3);
  for (double x : {0.0, 0.5, 1.0}) EXPECT_NEAR(cubic(x), v[static_cast<int>(x * 2)], 1e-15);
}

TEST(PotentialEvaluate, CubicGridReproducesLinearData) {
  const auto q = Potential::grid({1.0, 2.0, 3.0, 4.0, 5.0}, 3);
  for (double x = 0.0; x <= 1.0; x += 0.0625) EXPECT_NEAR(q(x), 1.0 + 4.0 * x, 1e-14);
}

TEST(PotentialProperty, FiniteAndSupportedEverywhere) {
  for (const auto& q : fixtures()) {
    for (int i = -200; i <= 1200; ++i) {
      const double x = i / 1000.0;
      const double v = q(x);
      EXPECT_TRUE(std::isfinite(v));
      if (x < 0.0 || x > 1.0) {
        EXPECT_EQ(v, 0.0);
      }
    }
  }
}

TEST(PotentialConstruction, RejectsInvalidInput) {
  EXPECT_THROW(Potential::square_well(std::nan("")), DomainError);
  EXPECT_THROW(Potential::step({0.0, 0.6, 0.5, 1.0}, {1, 2, 3}), DomainError);
  EXPECT_THROW(Potential::step({0.0, 1.0}, {1, 2}), DomainError);
  EXPECT_THROW(Potential::step({0.1, 1.0}, {1}), DomainError);
  EXPECT_THROW(Potential::grid({1.0}, 1), DomainError);
  EXPECT_THROW(Potential::grid({1.0, 2.0}, 2), DomainError);
  EXPECT_THROW(Potential::bump(-1, 1, 1.0), DomainError);
  EXPECT_THROW(Potential::piecewise_poly({0.0, 1.0}, {{}}), DomainError);
  EXPECT_THROW(splice(Potential::zero(), Potential::zero(), 1.5), DomainError);
  EXPECT_THROW(Potential::square_well(1.0).with_smoothness(Smoothness{0, 0, 1.0}), DomainError);
}

TEST(PotentialBump, VanishingDerivativesAtEndpoints) {
  // bump(m, n, A): derivatives below order m vanish at 0 and below order n at 1;
  // the m-th at 0 is A * m! and the n-th at 1 is A * (-1)^n * n!.
  for (auto [m, n] : {std::pair{1, 1}, {2, 1}, {1, 3}, {3, 2}}) {
    const auto q = Potential::bump(m, n, 2.0);
    auto inside = [&](double x) { return 2.0 * std::pow(x, m) * std::pow(1.0 - x, n); };
    const double h = 1e-3;
    for (int d = 0; d < m; ++d) EXPECT_NEAR(fd_derivative(inside, 0.0, d, h), 0.0, 1e-2) << m << n << d;
    const double factorial_m = std::tgamma(m + 1.0);
    EXPECT_NEAR(fd_derivative(inside, 0.0, m, h), 2.0 * factorial_m, 0.05 * 2.0 * factorial_m);
    for (int d = 0; d < n; ++d) EXPECT_NEAR(fd_derivative(inside, 1.0, d, h), 0.0, 1e-2);
    const double factorial_n = std::tgamma(n + 1.0);
    EXPECT_NEAR(std::abs(fd_derivative(inside, 1.0, n, h)), 2.0 * factorial_n, 0.05 * 2.0 * factorial_n);
    // And the library agrees with the formula inside the support.
    for (double x : {0.1, 0.37, 0.8}) EXPECT_DOUBLE_EQ(q(x), inside(x));
  }
}

TEST(PotentialReflect, SquareWellIsFixed) {
  const auto r = reflect(Potential::square_well(2.0));
  EXPECT_TRUE(std::holds_alternative<SquareWell>(r.representation()));
  EXPECT_FALSE(r.mirrored());
  EXPECT_EQ(r(0.3), 2.0);
}

TEST(PotentialReflect, StepSwapsPieces) {
  const auto r = reflect(Potential::step({0.0, 0.5, 1.0}, {1.0, 3.0}));
  const auto expect = Potential::step({0.0, 0.5, 1.0}, {3.0, 1.0});
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    if (x == 0.5) continue;  // the jump itself belongs to different sides
    EXPECT_EQ(r(x), expect(x)) << x;
  }
}

TEST(PotentialReflect, BumpSwapsExponents) {
  const auto r = reflect(Potential::bump(1, 2, 5.0));
  const auto* b = std::get_if<Bump>(&r.representation());
  ASSERT_NE(b, nullptr);
  EXPECT_EQ(b->m, 2);
  EXPECT_EQ(b->n, 1);
  EXPECT_EQ(r.smoothness()->m, 2);
  EXPECT_EQ(r.smoothness()->n, 1);
}

TEST(PotentialProperty, ReflectMatchesPointwiseAndIsInvolution) {
  for (const auto& q : fixtures()) {
    const auto r = reflect(q);
    const auto rr = reflect(r);
    for (int i = 0; i <= 1000; ++i) {
      const double x = i / 1000.0;
      EXPECT_EQ(rr(x), q(x));
      // Away from jumps, r(x) = q(1 - x).
      bool near_jump = false;
      for (double b : q.breakpoints()) near_jump = near_jump || std::abs((1.0 - x) - b) < 1e-9;
      if (!near_jump) {
        EXPECT_NEAR(r(x), q(1.0 - x), 1e-12 * (1.0 + std::abs(q(1.0 - x))));
      }
    }
  }
}

TEST(PotentialSplice, Examples) {
  const auto s = splice(Potential::square_well(2.0), Potential::square_well(2.0), 0.5);
  for (int i = 0; i <= 100; ++i) EXPECT_EQ(s(i / 100.0), 2.0);
  const auto t = splice(Potential::square_well(1.0), Potential::square_well(3.0), 0.5);
  EXPECT_EQ(t(0.25), 1.0);
  EXPECT_EQ(t(0.75), 3.0);
  EXPECT_EQ(t(0.5), 1.0);
}

TEST(PotentialProperty, SpliceWithItselfIsIdentity) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& q : fixtures()) {
    const auto s = splice(q, q, u(rng));
    for (int i = 0; i <= 1000; ++i) EXPECT_EQ(s(i / 1000.0), q(i / 1000.0));
  }
}

TEST(PotentialSplice, BreakpointsIncludeSplicePoint) {
  const auto s = splice(Potential::bump(1, 1, 1.0), Potential::square_well(3.0), 0.37);
  const auto bp = s.breakpoints();
  EXPECT_NE(std::find(bp.begin(), bp.end(), 0.37), bp.end());
  EXPECT_EQ(bp.front(), 0.0);
  EXPECT_EQ(bp.back(), 1.0);
}

TEST(PotentialL1Tail, Examples) {
  EXPECT_NEAR(l1_tail(Potential::square_well(2.0), 0.0), 2.0, 1e-12);
  EXPECT_EQ(l1_tail(Potential::square_well(2.0), 1.0), 0.0);
  EXPECT_NEAR(l1_tail(Potential::bump(1, 1, 6.0), 0.0), 1.0, 1e-10);
  EXPECT_NEAR(l1_tail(Potential::step({0.0, 0.5, 1.0}, {-1.0, 3.0}), 0.25), 0.25 + 1.5, 1e-12);
  EXPECT_THROW(l1_tail(Potential::zero(), 1.5), DomainError);
}

TEST(PotentialProperty, L1TailNonincreasing) {
  for (const auto& q : fixtures()) {
    double prev = l1_tail(q, 0.0);
    for (int i = 1; i <= 50; ++i) {
      const double cur = l1_tail(q, i / 50.0);
      EXPECT_LE(cur, prev + 1e-14);
      prev = cur;
    }
    EXPECT_EQ(l1_tail(q, 1.0), 0.0);
  }
}

TEST(PotentialClass, Q1Membership) {
  EXPECT_FALSE(in_class_q1(Potential::zero()));
  EXPECT_TRUE(in_class_q1(Potential::square_well(2.0)));
  EXPECT_TRUE(in_class_q1(Potential::bump(1, 1, 6.0)));
  EXPECT_FALSE(in_class_q1(Potential::step({0.0, 0.5, 1.0}, {0.0, 1.0})));
  EXPECT_TRUE(Potential::zero().vanishes_identically());
}

TEST(PotentialPairTest, PrefixAgreementChecked) {
  const auto q = Potential::square_well(1.0);
  EXPECT_NO_THROW(make_pair(q, splice(q, Potential::square_well(3.0), 0.5), 0.5));
  EXPECT_THROW(make_pair(q, splice(q, Potential::square_well(3.0), 0.4), 0.5), DomainError);
  EXPECT_THROW(make_pair(q, q, 1.5), DomainError);
}

TEST(PotentialSmoothness, Inferred) {
  EXPECT_FALSE(Potential::zero().smoothness().has_value());
  const auto b = Potential::bump(2, 3, 1.0).smoothness();
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->m, 2);
  EXPECT_EQ(b->n, 3);
  EXPECT_FALSE(Potential::grid({1.0, 2.0}, 1).smoothness().has_value());
}
