#include <cmath>

#include <gtest/gtest.h>

#include "dsrosc/kinematics.hpp"
#include "test_support.hpp"

namespace dsrosc {
namespace {

const ModelParams kPlot = ModelParams::dimensionless(0.1, 0.2);
const ModelParams kSR = ModelParams::dimensionless(0.1, 0.0);

TEST(Covector, ClassifiesBySignature) {
  EXPECT_EQ((Covector{-1.0, 0.0}.classify()), CausalClass::Timelike);
  EXPECT_EQ((Covector{0.0, -1.0}.classify()), CausalClass::Spacelike);
  EXPECT_EQ((Covector{-1.0, -1.0}.classify()), CausalClass::Lightlike);
  EXPECT_EQ((Covector{2.0, 0.5}.classify()), CausalClass::Timelike);
  EXPECT_EQ((Covector{0.3, -4.0}.classify()), CausalClass::Spacelike);
  EXPECT_EQ((Covector{3.0, -3.0}.classify()), CausalClass::Lightlike);
  EXPECT_THROW((Covector{0.0, 0.0}.classify()), Error);
}

TEST(Covector, ArbitraryCovectorsMapToCanonicalRepresentative) {
  const Covector a = Covector{5.0, 1.0}.canonical();
  EXPECT_EQ(a.a0, -1.0);
  EXPECT_EQ(a.a1, 0.0);
  const Covector b = Covector{2.0, 2.0}.canonical();
  EXPECT_EQ(b.a0, -1.0);
  EXPECT_EQ(b.a1, -1.0);
}

TEST(DeformedMap, UndeformedIsIdentity) {
  for (auto g : {GeometryKind::Timelike, GeometryKind::Spacelike, GeometryKind::Lightlike}) {
    for (double E : {-2.0, 0.0, 1.0, 7.5}) {
      for (double p : {-1.0, 0.0, 0.3}) {
        const TwoMomentum pi = deformed_map({E, p}, covector_for(g), kSR);
        EXPECT_EQ(pi.E, E);
        EXPECT_EQ(pi.p, p);
      }
    }
  }
}

TEST(DeformedMap, TimelikeValue) {
  // 0.5 / sqrt(1 - 0.2 * 0.5)
  const TwoMomentum pi = deformed_map({0.5, 0.0}, covector_for(GeometryKind::Timelike), kPlot);
  EXPECT_NEAR(pi.E, 0.527046276694729888, 1e-15);
  EXPECT_EQ(pi.p, 0.0);
}

TEST(DeformedMap, PoleIsDomainViolation) {
  // E = E_p = 1/eps = 5.
  try {
    deformed_map({5.0, 0.0}, covector_for(GeometryKind::Timelike), kPlot);
    FAIL() << "expected DomainViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainViolation);
  }
  EXPECT_THROW(deformed_map({1.0, 6.0}, covector_for(GeometryKind::Spacelike), kPlot), Error);
  EXPECT_THROW(deformed_map({3.0, 2.5}, covector_for(GeometryKind::Lightlike), kPlot), Error);
}

TEST(CasimirResidual, SrOnShell) {
  const double p = 0.3;
  EXPECT_NEAR(casimir_residual({std::sqrt(1.0 + p * p), p}, GeometryKind::SR, kPlot), 0.0, 1e-15);
}

TEST(CasimirResidual, VanishesOnIndependentlySolvedShell) {
  // For each first-power geometry the shell at fixed p is a quadratic in E:
  //   E^2 - p^2 = 1 + eps*(a.p).  Roots come from the test-side quadratic solver.
  for (double p : {-0.4, 0.0, 0.25, 0.9}) {
    for (double eps : {0.0, 1e-3, 0.2, 0.45}) {
      const ModelParams params = ModelParams::dimensionless(0.1, eps);
      // timelike: E^2 + eps E - (1 + p^2) = 0
      for (double E : testing_support::quadratic_roots(1.0, eps, -(1.0 + p * p))) {
        if (1.0 - eps * E <= 0.0) continue;
        EXPECT_NEAR(casimir_residual({E, p}, GeometryKind::Timelike, params), 0.0, 1e-10);
      }
      // spacelike: E^2 = p^2 + 1 - eps p
      const double e2 = p * p + 1.0 - eps * p;
      for (double E : {std::sqrt(e2), -std::sqrt(e2)}) {
        EXPECT_NEAR(casimir_residual({E, p}, GeometryKind::Spacelike, params), 0.0, 1e-10);
      }
      // lightlike: E^2 + eps E - (p^2 + 1 - eps p) = 0
      for (double E : testing_support::quadratic_roots(1.0, eps, -(p * p + 1.0 - eps * p))) {
        if (1.0 - eps * (E + p) <= 0.0) continue;
        EXPECT_NEAR(casimir_residual({E, p}, GeometryKind::Lightlike, params), 0.0, 1e-10);
      }
      // MS: (1 - eps^2) E^2 + 2 eps E - (1 + p^2) = 0
      for (double E : testing_support::quadratic_roots(1.0 - eps * eps, 2.0 * eps, -(1.0 + p * p))) {
        EXPECT_NEAR(casimir_residual({E, p}, GeometryKind::MagueijoSmolin, params), 0.0, 1e-10);
      }
    }
  }
}

TEST(CasimirResidual, FrozenShellPoints) {
  // E^2 + 0.2 E - 1 = 0  =>  E = (-0.2 + sqrt(4.04)) / 2
  EXPECT_NEAR(casimir_residual({0.904987562112089027, 0.0}, GeometryKind::Timelike, kPlot), 0.0, 1e-12);
  // (1 - 0.04) E^2 + 0.4 E - 1 = 0  =>  E = 5/6
  EXPECT_NEAR(casimir_residual({5.0 / 6.0, 0.0}, GeometryKind::MagueijoSmolin, kPlot), 0.0, 1e-12);
  EXPECT_NEAR(casimir_residual({-1.25, 0.0}, GeometryKind::MagueijoSmolin, kPlot), 0.0, 1e-12);
}

TEST(CasimirResidual, MsPole) {
  try {
    casimir_residual({5.0, 0.0}, GeometryKind::MagueijoSmolin, kPlot);
    FAIL() << "expected MSPoleError";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MSPole);
  }
}

TEST(CasimirResidual, DenominatorsMatchGeometry) {
  const TwoMomentum q{0.7, -0.3};
  EXPECT_DOUBLE_EQ(casimir_denominator(q, GeometryKind::Timelike, kPlot), 1.0 - 0.2 * 0.7);
  EXPECT_DOUBLE_EQ(casimir_denominator(q, GeometryKind::Spacelike, kPlot), 1.0 - 0.2 * -0.3);
  EXPECT_DOUBLE_EQ(casimir_denominator(q, GeometryKind::Lightlike, kPlot), 1.0 - 0.2 * (0.7 - 0.3));
  EXPECT_DOUBLE_EQ(casimir_denominator(q, GeometryKind::MagueijoSmolin, kPlot),
                   (1.0 - 0.2 * 0.7) * (1.0 - 0.2 * 0.7));
}

TEST(MapExpansionDefect, ZeroWhenUndeformed) {
  EXPECT_EQ(map_expansion_defect({0.5, 0.3}, covector_for(GeometryKind::Timelike), kSR), 0.0);
}

TEST(MapExpansionDefect, SecondOrderInEps) {
  // defect / eps^2 -> 3/8 (a.p)^2 max(|E|,|p|) = 0.046875 for (E,p) = (0.5, 0.3), timelike.
  const TwoMomentum q{0.5, 0.3};
  double prev = 0.0;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const ModelParams params = ModelParams::dimensionless(0.1, eps);
    const double ratio = map_expansion_defect(q, covector_for(GeometryKind::Timelike), params) / (eps * eps);
    EXPECT_NEAR(ratio, 0.046875, 0.001);
    if (prev != 0.0) {
      EXPECT_LT(std::abs(ratio - 0.046875), std::abs(prev - 0.046875));
    }
    prev = ratio;
  }
}

TEST(MapExpansionDefect, LightlikeSmall) {
  const ModelParams params = ModelParams::dimensionless(0.1, 1e-3);
  const double defect = map_expansion_defect({0.4, 0.1}, covector_for(GeometryKind::Lightlike), params);
  EXPECT_LT(defect, 1e-6);
  EXPECT_NEAR(defect, 3.75156318e-8, 1e-12);
}

}  // namespace
}  // namespace dsrosc
