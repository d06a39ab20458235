#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "trustsim/trust_models.hpp"

using namespace trustsim;

// Reference values below were evaluated with mpmath at 30 digits.
constexpr double kMonirAt07 = 0.297375320224904000738157318811;  // 0.1 + tanh(0.2)
constexpr double kSigmoid2 = 0.880797077977882444059729141302;   // 1 / (1 + e^-2)
constexpr double kEctGain = 0.57615941559557648881194582826;     // 0.5 + 0.1 tanh(1)

TEST_CASE("TrustLevel clamps on construction") {
  CHECK(TrustLevel{-0.2}.value() == 0.0);
  CHECK(TrustLevel{1.7}.value() == 1.0);
  CHECK(TrustLevel{0.25}.value() == 0.25);
}

TEST_SUITE("monir") {
  TEST_CASE("branches with default thresholds") {
    const MonirConfig cfg;
    CHECK(monir_trust(0.2, cfg).value() == 0.0);
    CHECK(monir_trust(0.95, cfg).value() == 1.0);
    CHECK(monir_trust(0.7, cfg).value() == doctest::Approx(kMonirAt07).epsilon(1e-12));
    CHECK(monir_trust(0.4, cfg).value() == 0.1);
  }

  TEST_CASE("thresholds are closed on the left") {
    const MonirConfig cfg;
    CHECK(monir_trust(0.3, cfg).value() == 0.1);
    CHECK(monir_trust(0.5, cfg).value() == doctest::Approx(0.1));
    CHECK(monir_trust(0.9, cfg).value() == 1.0);
  }

  TEST_CASE("third branch saturates at 1") {
    MonirConfig cfg;
    cfg.epsilon = 0.9;
    cfg.slope = 50.0;
    CHECK(monir_trust(0.89, cfg).value() == 1.0);
  }

  TEST_CASE("nondecreasing in score") {
    const MonirConfig cfg;
    double prev = monir_trust(0.0, cfg).value();
    for (int i = 1; i <= 20000; ++i) {
      const double t = monir_trust(i / 20000.0, cfg).value();
      REQUIRE(t >= prev);
      prev = t;
    }
  }

  TEST_CASE("config validation") {
    MonirConfig cfg;
    cfg.f_dependable = 0.2;  // below f_p
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.slope = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.epsilon = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK_NOTHROW(MonirConfig{}.validate());
  }
}

TEST_SUITE("xu_dudek") {
  TEST_CASE("mean dynamics") {
    const XuDudekConfig cfg;
    PerformanceObservation obs;
    obs.score = 1.0;
    obs.prev_score = 0.0;
    CHECK(xu_dudek_update(TrustLevel{0.5}, obs, cfg).value() == doctest::Approx(0.65));

    XuDudekConfig zero;
    zero.w_performance = zero.w_performance_delta = 0.0;
    CHECK(xu_dudek_update(TrustLevel{0.5}, obs, zero).value() == 0.5);

    obs.prev_score = 1.0;
    CHECK(xu_dudek_update(TrustLevel{0.98}, obs, cfg).value() == 1.0);
  }

  TEST_CASE("stochastic mode scales the supplied draw") {
    XuDudekConfig cfg;
    cfg.stochastic = true;
    cfg.sigma = 0.1;
    PerformanceObservation obs;
    CHECK_THROWS_AS(xu_dudek_update(TrustLevel{0.5}, obs, cfg), std::logic_error);
    CHECK(xu_dudek_update(TrustLevel{0.5}, obs, cfg, -1.0).value() == doctest::Approx(0.4));
  }

  TEST_CASE("deterministic mode is pure") {
    const XuDudekConfig cfg;
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      PerformanceObservation obs;
      obs.score = u(gen);
      obs.prev_score = u(gen);
      const TrustLevel prev{u(gen)};
      REQUIRE(xu_dudek_update(prev, obs, cfg) == xu_dudek_update(prev, obs, cfg));
    }
  }

  TEST_CASE("intervention probability") {
    XuDudekConfig cfg;
    const PerformanceObservation obs;
    CHECK(xu_dudek_intervention_prob(TrustLevel{0.7}, TrustLevel{0.2}, obs, cfg) == 0.5);

    cfg.w_intervention_bias = -50.0;
    CHECK(xu_dudek_intervention_prob(TrustLevel{0.7}, TrustLevel{0.2}, obs, cfg) < 1e-20);

    cfg = {};
    cfg.w_intervention_bias = 1.0;
    cfg.w_intervention_trust = 1.0;
    CHECK(xu_dudek_intervention_prob(TrustLevel{1.0}, TrustLevel{1.0}, obs, cfg) ==
          doctest::Approx(kSigmoid2).epsilon(1e-14));

    cfg = {};
    cfg.w_intervention_trust_delta = 2.0;
    cfg.w_intervention_task_change = 1.0;
    PerformanceObservation changed;
    changed.task_change = true;
    // 2 * (0.75 - 0.25) + 1 = 2
    CHECK(xu_dudek_intervention_prob(TrustLevel{0.75}, TrustLevel{0.25}, changed, cfg) ==
          doctest::Approx(kSigmoid2).epsilon(1e-14));
  }
}

TEST_SUITE("guo_yang") {
  TEST_CASE("success raises alpha, failure raises beta") {
    const GuoYangConfig cfg;
    const GuoYangState prior = guo_yang_initial(cfg);
    CHECK(guo_yang_update(prior, true, cfg) == GuoYangState{2.0, 1.0});
    CHECK(guo_yang_update(prior, false, cfg) == GuoYangState{1.0, 2.0});

    GuoYangState s = prior;
    for (bool outcome : {true, true, true, false}) s = guo_yang_update(s, outcome, cfg);
    CHECK(s == GuoYangState{4.0, 2.0});
  }

  TEST_CASE("posterior mean") {
    CHECK(guo_yang_predict({1.0, 1.0}).value() == 0.5);
    CHECK(guo_yang_predict({4.0, 2.0}).value() == doctest::Approx(2.0 / 3.0));
    CHECK(guo_yang_predict({2.0, 1.0}).value() == doctest::Approx(2.0 / 3.0));
  }

  TEST_CASE("order of outcomes does not matter") {
    GuoYangConfig cfg;
    cfg.w_success = 0.7;
    cfg.w_failure = 1.3;
    std::vector<bool> seq{true, false, true, true, false, false, true, false, true};
    std::mt19937 gen(11);
    GuoYangState ref = guo_yang_initial(cfg);
    for (bool b : seq) ref = guo_yang_update(ref, b, cfg);
    for (int i = 0; i < 50; ++i) {
      std::shuffle(seq.begin(), seq.end(), gen);
      GuoYangState s = guo_yang_initial(cfg);
      for (bool b : seq) s = guo_yang_update(s, b, cfg);
      REQUIRE(guo_yang_predict(s).value() == doctest::Approx(guo_yang_predict(ref).value()).epsilon(1e-14));
    }
  }

  TEST_CASE("non-positive weights are rejected") {
    GuoYangConfig cfg;
    cfg.w_failure = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.alpha0 = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
}

TEST_SUITE("ect") {
  TEST_CASE("initialisation") {
    const EctConfig cfg;
    const EctState uav_flat = ect_initialize(0.8, 0.5, cfg);
    CHECK(uav_flat.expectation == doctest::Approx(0.65));
    CHECK(uav_flat.initial_expectation == doctest::Approx(0.65));
    CHECK(uav_flat.trust.value() == 0.5);
    CHECK(uav_flat.initial_trust.value() == 0.5);
    for (Facet f : {Facet::kCompetence, Facet::kAbility, Facet::kDependability}) {
      CHECK(uav_flat.facet(f).value() == 0.5);
    }
    CHECK(ect_initialize(0.0, 1.0, cfg).expectation == 0.0);
    CHECK(ect_initialize(1.0, 0.0, cfg).expectation == 1.0);
    CHECK_THROWS_AS(ect_initialize(1.2, 0.0, cfg), std::invalid_argument);
    CHECK_THROWS_AS(ect_initialize(0.5, -0.1, cfg), std::invalid_argument);
  }

  TEST_CASE("performance score") {
    CHECK(ect_evaluate_performance(true, 0) == 1.0);
    CHECK(ect_evaluate_performance(false, 500) == 0.0);
    CHECK(ect_evaluate_performance(true, 250) == 0.75);
    CHECK(ect_evaluate_performance(false, 900) == 0.0);
  }

  TEST_CASE("updates") {
    EctConfig cfg;
    EctState s = ect_initialize(0.8, 0.5, cfg);
    s.expectation = 0.5;

    CHECK(ect_update(s, 0.5, cfg, true).trust.value() == 0.5);
    CHECK(ect_update(s, 1.0, cfg, true).trust.value() == doctest::Approx(kEctGain).epsilon(1e-14));

    cfg.decay = 0.01;
    const EctState idle = ect_update(s, 0.5, cfg, false);
    CHECK(idle.trust.value() == doctest::Approx(0.495));
    CHECK(idle.expectation == 0.5);
  }

  TEST_CASE("expectation follows performance") {
    const EctConfig cfg;
    EctState s = ect_initialize(0.6, 0.5, cfg);
    s = ect_update(s, 1.0, cfg, true);
    CHECK(s.expectation == doctest::Approx(0.9 * 0.45 + 0.1));
  }

  TEST_CASE("facet weighting") {
    EctConfig cfg;
    cfg.facet_weights = {0.5, 0.25, 0.25};
    EctState s;
    s.facets = {TrustLevel{0.8}, TrustLevel{0.4}, TrustLevel{0.0}};
    s.trust = TrustLevel{0.5};
    s.expectation = 0.5;
    const EctStep step = ect_step(s, 0.5, cfg, true);
    CHECK(step.state.trust.value() == doctest::Approx(0.5));
    CHECK(step.unclamped_trust == doctest::Approx(0.5));
  }

  TEST_CASE("facet weights must sum to one") {
    EctConfig cfg;
    cfg.facet_weights = {0.5, 0.5, 0.5};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.decay = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }

  TEST_CASE("step bound and sign with no decay") {
    const EctConfig cfg;
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 5000; ++i) {
      EctState s;
      const double t = u(gen);
      s.facets = {TrustLevel{t}, TrustLevel{t}, TrustLevel{t}};
      s.trust = TrustLevel{t};
      s.expectation = u(gen);
      const double perf = u(gen);
      const double change = ect_step(s, perf, cfg, true).unclamped_trust - t;
      REQUIRE(std::abs(change) <= cfg.learn_rate + 1e-12);
      const double delta = perf - s.expectation;
      if (delta > 0) REQUIRE(change >= 0.0);
      if (delta < 0) REQUIRE(change <= 0.0);
    }
  }
}

TEST_SUITE("team aggregation") {
  TEST_CASE("mean") {
    const std::vector<TrustLevel> a{TrustLevel{0.4}, TrustLevel{0.6}};
    CHECK(team_trust_aggregate(a).value() == doctest::Approx(0.5));
    const std::vector<TrustLevel> b{TrustLevel{0.7}};
    CHECK(team_trust_aggregate(b).value() == 0.7);
    const std::vector<TrustLevel> c{TrustLevel{0.0}, TrustLevel{1.0}, TrustLevel{0.5},
                                    TrustLevel{0.5}};
    CHECK(team_trust_aggregate(c).value() == 0.5);
    CHECK_THROWS_AS(team_trust_aggregate(std::vector<TrustLevel>{}), std::invalid_argument);
  }

  TEST_CASE("bounded by extremes and permutation invariant") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
      std::vector<TrustLevel> v(1 + gen() % 12);
      for (auto& t : v) t = TrustLevel{u(gen)};
      const double mean = team_trust_aggregate(v).value();
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end(), [](auto a, auto b) {
        return a.value() < b.value();
      });
      REQUIRE(mean >= lo->value() - 1e-15);
      REQUIRE(mean <= hi->value() + 1e-15);
      std::shuffle(v.begin(), v.end(), gen);
      REQUIRE(team_trust_aggregate(v).value() == doctest::Approx(mean).epsilon(1e-14));
    }
  }
}

TEST_CASE("no_trust is constant") {
  PerformanceObservation ok;
  ok.success = true;
  ok.score = 1.0;
  CHECK(no_trust(ok).value() == 0.5);
  CHECK(no_trust(PerformanceObservation{}).value() == 0.5);
  std::mt19937 gen(2);
  for (int i = 0; i < 100; ++i) {
    PerformanceObservation obs;
    obs.success = gen() % 2;
    obs.score = (gen() % 100) / 100.0;
    REQUIRE(no_trust(obs).value() == 0.5);
  }
}

TEST_CASE("model names round-trip") {
  for (ModelKind k : kAllModels) CHECK(parse_model(model_name(k)) == k);
  CHECK_FALSE(parse_model("foo").has_value());
}
