#include "routebayes/bayes_core.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace routebayes;

namespace {

WeightVector W(std::vector<double> v) { return WeightVector::from_simplex(v); }

}  // namespace

TEST(ValidateSimplex, AcceptsSimplexPoint) {
    const auto w = validate_simplex(std::vector<double>{0.5, 0.3, 0.2}, 1e-9);
    ASSERT_EQ(w.size(), 3u);
    EXPECT_DOUBLE_EQ(w[0], 0.5);
    EXPECT_DOUBLE_EQ(w[1], 0.3);
    EXPECT_DOUBLE_EQ(w[2], 0.2);
}

TEST(ValidateSimplex, Singleton) {
    const auto w = validate_simplex(std::vector<double>{1.0}, 1e-9);
    EXPECT_EQ(w[0], 1.0);
}

TEST(ValidateSimplex, RejectsSumOutOfTolerance) {
    try {
        validate_simplex(std::vector<double>{0.5, 0.5, 0.1}, 1e-9);
        FAIL() << "expected SumOutOfTolerance";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::SumOutOfTolerance);
        ASSERT_TRUE(e.value());
        EXPECT_NEAR(*e.value(), 1.1, 1e-15);
    }
}

TEST(ValidateSimplex, ReportsNegativeIndex) {
    try {
        validate_simplex(std::vector<double>{0.6, -0.1, 0.5});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NegativeEntry);
        EXPECT_EQ(e.index(), 1u);
    }
}

TEST(ValidateSimplex, RejectsEmpty) {
    try {
        validate_simplex(std::vector<double>{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::EmptyVector);
    }
}

TEST(ValidateSimplex, RenormalizesWithinTolerance) {
    const auto w = validate_simplex(std::vector<double>{0.5 + 4e-10, 0.5}, 1e-9);
    EXPECT_NEAR(w[0] + w[1], 1.0, 1e-15);
    EXPECT_GT(w[0], w[1]);
    EXPECT_THROW(validate_simplex(std::vector<double>{0.5 + 4e-9, 0.5}, 1e-9), Error);
}

TEST(Likelihoods, RangeChecked) {
    EXPECT_NO_THROW(LikelihoodVector({0.0, 1.0}));
    try {
        LikelihoodVector({0.2, 1.5});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::LikelihoodOutOfRange);
        EXPECT_EQ(e.index(), 1u);
    }
}

TEST(TotalProbability, ConstantLikelihood) {
    EXPECT_NEAR(total_probability(WeightVector::uniform(3), {0.6, 0.6, 0.6}), 0.6, 1e-15);
}

TEST(TotalProbability, DegeneratePrior) {
    EXPECT_EQ(total_probability(W({1.0, 0.0, 0.0}), {0.8, 0.4, 0.1}), 0.8);
}

TEST(TotalProbability, WorkedExample) {
    // 0.5*0.8 + 0.3*0.4 + 0.2*0.1 = 0.40 + 0.12 + 0.02
    EXPECT_NEAR(total_probability(W({0.5, 0.3, 0.2}), {0.8, 0.4, 0.1}), 0.54, 1e-15);
}

TEST(TotalProbability, LengthMismatch) {
    try {
        total_probability(W({0.5, 0.5}), {0.8, 0.4, 0.1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::LengthMismatch);
    }
}

TEST(Posterior, UniformInUniformOut) {
    for (double c : {0.01, 0.5, 1.0}) {
        const auto ev = posterior(WeightVector::uniform(3), {c, c, c});
        for (double p : ev.posterior) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);
    }
}

TEST(Posterior, WorkedExample) {
    const auto ev = posterior(W({0.5, 0.3, 0.2}), {0.8, 0.4, 0.1});
    EXPECT_NEAR(ev.total_probability, 0.54, 1e-15);
    EXPECT_NEAR(ev.posterior[0], 0.40 / 0.54, 1e-15);
    EXPECT_NEAR(ev.posterior[1], 0.12 / 0.54, 1e-15);
    EXPECT_NEAR(ev.posterior[2], 0.02 / 0.54, 1e-15);
    EXPECT_NEAR(ev.posterior[0], 0.7407, 5e-5);
    EXPECT_NEAR(ev.posterior[1], 0.2222, 5e-5);
    EXPECT_NEAR(ev.posterior[2], 0.0370, 5e-5);
    // Same summation order as the contributions.
    EXPECT_EQ(ev.total_probability, ev.contributions[0] + ev.contributions[1] + ev.contributions[2]);
}

TEST(Posterior, ZeroEvidenceIsAnError) {
    try {
        posterior(W({0.5, 0.5}), {0.0, 0.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ZeroEvidence);
    }
}

TEST(Evaluate, DefaultThreeComponentSet) {
    const auto set = default_hypotheses();
    ASSERT_EQ(set.size(), 3u);
    EXPECT_EQ(set[0].id, "customer_service");
    EXPECT_EQ(set[1].id, "unavailable_capital");
    EXPECT_EQ(set[2].id, "costs");
    const auto ev = evaluate(set, W({0.5, 0.3, 0.2}), {0.8, 0.4, 0.1});
    EXPECT_NEAR(ev.evaluation.total_probability, 0.54, 1e-15);
    EXPECT_EQ(ev.hypotheses[ev.top_contributor()].id, "customer_service");
}

TEST(Evaluate, FiveHypothesesUniform) {
    const HypothesisSet set({{"h1", "", ""}, {"h2", "", ""}, {"h3", "", ""}, {"h4", "", ""}, {"h5", "", ""}});
    const auto ev = evaluate(set, WeightVector::uniform(5), {0.1, 0.2, 0.3, 0.4, 0.5});
    EXPECT_NEAR(ev.evaluation.total_probability, 0.3, 1e-15);
}

TEST(Evaluate, Singleton) {
    const HypothesisSet set({{"only", "", ""}});
    const auto ev = evaluate(set, W({1.0}), {0.7});
    EXPECT_EQ(ev.evaluation.total_probability, 0.7);
    EXPECT_EQ(ev.evaluation.posterior, std::vector<double>{1.0});
}

TEST(Evaluate, LengthMustMatchSet) {
    EXPECT_THROW(evaluate(default_hypotheses(), W({0.5, 0.5}), {0.1, 0.2}), Error);
}

TEST(HypothesisSet, Invariants) {
    EXPECT_THROW(HypothesisSet({}), Error);
    try {
        HypothesisSet({{"a", "", ""}, {"a", "", ""}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DuplicateHypothesisId);
        EXPECT_EQ(e.index(), 1u);
    }
    try {
        HypothesisSet({{"", "", ""}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::EmptyHypothesisId);
    }
}

// Property checks over random instances.
class BayesProperties : public ::testing::TestWithParam<std::size_t> {
protected:
    std::mt19937_64 rng{20240611 + GetParam()};

    WeightVector random_weights(std::size_t n) {
        std::exponential_distribution<double> e(1.0);
        std::vector<double> raw(n);
        double sum = 0.0;
        for (double& x : raw) sum += (x = e(rng));
        for (double& x : raw) x /= sum;
        return WeightVector::from_simplex(raw);
    }

    LikelihoodVector random_likelihoods(std::size_t n) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<double> l(n);
        for (double& x : l) x = u(rng) < 0.1 ? 0.0 : u(rng);
        return LikelihoodVector(std::move(l));
    }
};

TEST_P(BayesProperties, BoundsNormalizationAbsorption) {
    const std::size_t n = GetParam();
    for (int trial = 0; trial < 500; ++trial) {
        const auto w = random_weights(n);
        const auto l = random_likelihoods(n);
        const double total = total_probability(w, l);
        const auto [lo, hi] = std::minmax_element(l.values().begin(), l.values().end());
        EXPECT_GE(total, *lo - 1e-15);
        EXPECT_LE(total, *hi + 1e-15);
        if (total <= 0.0) continue;
        const auto ev = posterior(w, l);
        double sum = 0.0;
        for (double p : ev.posterior) sum += p;
        EXPECT_NEAR(sum, 1.0, 1e-12);
        for (std::size_t i = 0; i < n; ++i)
            if (l[i] == 0.0) {
                EXPECT_EQ(ev.posterior[i], 0.0);
            }
    }
}

TEST_P(BayesProperties, ProportionalityAndMonotonicity) {
    const std::size_t n = GetParam();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const auto w = random_weights(n);
        const auto l = random_likelihoods(n);
        const double total = total_probability(w, l);
        if (total > 0.0) {
            const auto ev = posterior(w, l);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (ev.contributions[i] > 0.0 && ev.contributions[j] > 0.0) {
                        EXPECT_NEAR(ev.posterior[i] / ev.posterior[j], ev.contributions[i] / ev.contributions[j],
                                    1e-12 * ev.contributions[i] / ev.contributions[j]);
                    }
        }
        // Raise one likelihood.
        std::vector<double> raised(l.values().begin(), l.values().end());
        const std::size_t k = trial % n;
        raised[k] = raised[k] + (1.0 - raised[k]) * u(rng);
        const double after = total_probability(w, LikelihoodVector(raised));
        EXPECT_GE(after, total);
        if (w[k] > 0.0 && raised[k] > l[k]) {
            EXPECT_GT(after, total);
        }
    }
}

TEST_P(BayesProperties, ScaleInvariance) {
    const std::size_t n = GetParam();
    for (int trial = 0; trial < 300; ++trial) {
        const auto w = random_weights(n);
        const auto base = random_likelihoods(n);
        const double c = 0.25;
        std::vector<double> scaled(base.values().begin(), base.values().end());
        for (double& x : scaled) x *= c;
        const double t0 = total_probability(w, base);
        const double t1 = total_probability(w, LikelihoodVector(scaled));
        EXPECT_NEAR(t1, c * t0, 1e-15);
        if (t0 <= 0.0) continue;
        const auto p0 = posterior(w, base).posterior;
        const auto p1 = posterior(w, LikelihoodVector(scaled)).posterior;
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(p0[i], p1[i], 1e-12);
    }
}

TEST_P(BayesProperties, Reproducible) {
    const std::size_t n = GetParam();
    const auto w = random_weights(n);
    const auto l = random_likelihoods(n);
    if (total_probability(w, l) > 0.0) {
        EXPECT_EQ(posterior(w, l), posterior(w, l));
    }
}

INSTANTIATE_TEST_SUITE_P(Sizes, BayesProperties, ::testing::Values(1, 2, 3, 5, 8));
