// Copyright 2026 The persweep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "persweep/function_basis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"

namespace persweep {
namespace {

TEST(FunctionBasis, FourierIntegrals) {
  const FunctionBasis basis = FunctionBasis::Fourier(2);
  ASSERT_EQ(basis.size(), 5u);
  EXPECT_NEAR(basis.Integral(0, 0.0, 1.0), 1.0, 1e-12);
  for (std::size_t j = 1; j < basis.size(); ++j) EXPECT_NEAR(basis.Integral(j, 0.0, 1.0), 0.0, 1e-13);
  // cos(2 pi t) over [0, 1/4] is 1 / (2 pi).
  EXPECT_NEAR(basis.Integral(1, 0.0, 0.25), 1.0 / (2.0 * std::numbers::pi), 1e-13);
  const CoverageSet wrap({{0.75, 0.25}});
  EXPECT_NEAR(basis.Integral(1, wrap), 1.0 / std::numbers::pi, 1e-13);
}

TEST(FunctionBasis, GaussianIsPeriodic) {
  const FunctionBasis basis = FunctionBasis::Gaussian(4, 0.1);
  EXPECT_NEAR(basis.Eval(0, 0.125), 1.0, 1e-14);
  EXPECT_NEAR(basis.Eval(0, 0.125 + 0.3), basis.Eval(0, 0.125 - 0.3 + 1.0), 1e-12);
}

TEST(SynthesizeSampled, BoundsHoldOnFineGrid) {
  const auto model = testing::E1Model(10);
  const FunctionBasis basis = FunctionBasis::Fourier(3);
  const SampledSynthesisResult r = SynthesizeSampled(basis, model);
  ASSERT_EQ(r.status, SynthesisStatus::kFeasible);
  ASSERT_TRUE(r.bounds_hold);
  ASSERT_TRUE(r.margin);
  EXPECT_GT(*r.margin, 0.0);
  for (int g = 0; g < 5000; ++g) {
    const double t = (g + 0.5) / 5000.0;
    const double v = basis.Combine(r.alpha, t);
    EXPECT_GE(v, 0.5 * (1.0 - 1e-9));
    EXPECT_LE(v, 2.0 * (1.0 + 1e-9));
  }
  ASSERT_TRUE(r.projected);
  EXPECT_GT(StabilityMargins(*r.projected, model)[0], 0.0);
  // The smooth profile cannot beat the exact rectangular optimum.
  const auto exact = Synthesize(model, LpKind::kMargin);
  EXPECT_LE(*r.margin, *exact.objective + 1e-9);
}

TEST(SynthesizeSampled, SparseSamplesNeedTightening) {
  const auto model = testing::E1Model(10);
  SampledSynthesisOptions opts;
  for (int s = 0; s < 24; ++s) opts.samples.push_back(s / 24.0);
  const SampledSynthesisResult r = SynthesizeSampled(FunctionBasis::Fourier(4), model, opts);
  ASSERT_EQ(r.status, SynthesisStatus::kFeasible);
  if (r.bounds_hold) {
    EXPECT_GT(r.rounds, 1u);
    EXPECT_GT(r.xi, 0.0);
  }
}

TEST(SynthesizeSampled, UncoverablePointIsInfeasible) {
  const auto model = testing::SingleRobotModel({CoverageSet{}}, {1.0}, {2.0}, 4, 0.5, 2.0);
  SampledSynthesisOptions opts;
  opts.maximize_margin = false;
  EXPECT_EQ(SynthesizeSampled(FunctionBasis::Fourier(2), model, opts).status,
            SynthesisStatus::kInfeasible);
}

}  // namespace
}  // namespace persweep
