#include <doctest.h>

#include <cmath>
#include <vector>

#include "ceilfit/error.hpp"
#include "ceilfit/flops.hpp"
#include "support.hpp"

using namespace ceilfit;
using testing::Gen;
using testing::tiny_model;

namespace {

using u128 = unsigned __int128;

// Independent integer oracle for the per-token forward cost.
u128 oracle_forward(const ModelConfig& c, std::int64_t s) {
  const u128 l = c.num_layers, h = c.hidden_size, ff = c.ffn_intermediate, v = c.vocab_size,
             kv = c.kv_total_dim;
  const u128 dense = 2 * (l * (3 * h * ff + 2 * h * (h + kv)) + 2 * v * h);
  return dense + 4 * static_cast<u128>(s) * l * h;
}

double to_double(u128 v) { return static_cast<double>(static_cast<long double>(v)); }

StepSpec sft(std::int64_t b, double s) {
  StepSpec st;
  st.algorithm = Algorithm::kSft;
  st.batch = b;
  st.avg_seq_len = s;
  return st;
}

}  // namespace

TEST_CASE("forward FLOPs per token, hand-evaluated") {
  CHECK(forward_flops_per_token(tiny_model(), 1).value() == 22.0);
  CHECK(forward_flops_per_token({2, 1, 1, 1, 1}, 1).value() == 40.0);
  CHECK(forward_flops_per_token(tiny_model(), 2).value() == 26.0);
}

TEST_CASE("training FLOPs per token is three forward passes") {
  CHECK(train_flops_per_token(tiny_model(), 1).value() == 66.0);
  CHECK(train_flops_per_token(tiny_model(), 2).value() == 78.0);
  Gen g(11);
  for (int i = 0; i < 200; ++i) {
    const auto c = g.model();
    const double s = g.length();
    CHECK(train_flops_per_token(c, s).value() == 3.0 * forward_flops_per_token(c, s).value());
  }
}

TEST_CASE("forward cost is affine in sequence length") {
  Gen g(12);
  for (int i = 0; i < 200; ++i) {
    const auto c = g.model();
    const auto s = g.integer(1, 4096);
    const double a = forward_flops_per_token(c, static_cast<double>(s)).value();
    const double b = forward_flops_per_token(c, static_cast<double>(2 * s)).value();
    CHECK(b - a == doctest::Approx(4.0 * s * c.num_layers * c.hidden_size).epsilon(1e-12));
    CHECK(a == to_double(oracle_forward(c, s)));
  }
}

TEST_CASE("per-step formulas on the tiny config") {
  const auto t = tiny_model();
  CHECK(sft_step_flops(t, 2, 1).value() == 132.0);
  CHECK(grpo_step_flops(t, 1, 2, 1).value() == 176.0);
  CHECK(dapo_step_flops(t, 2, 1, 1, 1, 1).value() == 110.0);
  CHECK(dapo_step_flops(t, 3, 2, 4, 2, 1).value() == 792.0);
  CHECK(hybrid_step_flops(t, 1, 1, 1, 1, 2).value() == 296.0);
  CHECK(upt_step_flops(t, 2, 1, 1, 1, 1).value() == 176.0);
  CHECK(upt_step_flops(t, 1, 0, 1, 1, 2).value() == 178.0);
  CHECK(upt_step_flops(t, 3, 0, 0, 1, 0).value() == 3.0 * 22.0);
}

TEST_CASE("precondition violations") {
  const auto t = tiny_model();
  CHECK_THROWS_AS(sft_step_flops(t, 0, 1), InputDomainError);
  CHECK_THROWS_AS(forward_flops_per_token(t, 0), InputDomainError);
  CHECK_THROWS_AS(forward_flops_per_token(t, -3), InputDomainError);
  CHECK_THROWS_AS(grpo_step_flops(t, 1, 0, 1), InputDomainError);
  CHECK_THROWS_AS(dapo_step_flops(t, 1, 1, 2, 1, 1), InputDomainError);  // B_train > K*B_gen
  CHECK_NOTHROW(dapo_step_flops(t, 2, 1, 2, 1, 1));                      // equality allowed
  CHECK_THROWS_AS(hybrid_step_flops(t, 1, 1, -1, 1, 1), InputDomainError);
  CHECK_THROWS_AS(forward_flops_per_token({1, 2, 1, 1, 3}, 1), InputDomainError);  // D_KV > H
  CHECK_THROWS_AS(forward_flops_per_token({0, 1, 1, 1, 1}, 1), InputDomainError);
  CHECK_THROWS_AS(FlopCount(-1.0), InputDomainError);
  CHECK_THROWS_AS(FlopCount(NAN), InputDomainError);
}

TEST_CASE("StepSpec validation rejects fields foreign to the algorithm") {
  StepSpec s = sft(2, 1);
  CHECK_NOTHROW(validate(s));
  s.group_size = 4;
  CHECK_THROWS_AS(validate(s), InputDomainError);
  s = sft(2, 1);
  s.batch = -1;
  CHECK_THROWS_AS(validate(s), InputDomainError);
  CHECK_THROWS_AS(step_flops(tiny_model(), s), InputDomainError);
}

TEST_CASE("algorithm names") {
  CHECK(parse_algorithm("sft") == Algorithm::kSft);
  CHECK(parse_algorithm("GRPO") == Algorithm::kGrpo);
  CHECK(parse_algorithm("Dapo") == Algorithm::kDapo);
  CHECK(parse_algorithm("LUFFY") == Algorithm::kHybrid);
  CHECK(parse_algorithm("srft") == Algorithm::kHybrid);
  CHECK(parse_algorithm("upt") == Algorithm::kUpt);
  CHECK_FALSE(parse_algorithm("ppo").has_value());
  for (auto a : {Algorithm::kSft, Algorithm::kGrpo, Algorithm::kDapo, Algorithm::kHybrid,
                 Algorithm::kUpt}) {
    CHECK(parse_algorithm(to_string(a)) == a);
  }
}

TEST_CASE("reduction identities hold exactly") {
  Gen g(13);
  for (int i = 0; i < 1000; ++i) {
    const auto c = g.model();
    const auto b = g.integer(1, 1024);
    const auto grp = g.integer(1, 16);
    const double s = g.length();
    const auto grpo = grpo_step_flops(c, b, grp, s);
    CHECK(dapo_step_flops(c, 1, b, b, grp, s) == grpo);
    CHECK(hybrid_step_flops(c, b, grp, 0, s, 0) == grpo);
  }
}

TEST_CASE("per-step formulas match an integer oracle") {
  Gen g(14);
  for (int i = 0; i < 300; ++i) {
    ModelConfig c;
    c.num_layers = g.integer(1, 32);
    c.hidden_size = g.integer(1, 4096);
    c.ffn_intermediate = g.integer(1, 16384);
    c.vocab_size = g.integer(1, 160000);
    c.kv_total_dim = g.integer(1, c.hidden_size);
    const auto b = g.integer(1, 64), grp = g.integer(1, 8), k = g.integer(1, 4);
    const auto s = g.integer(1, 2048), s2 = g.integer(1, 2048);
    const auto bt = g.integer(1, k * b), n = g.integer(0, 4);
    const auto f1 = oracle_forward(c, s), f2 = oracle_forward(c, s2);
    const u128 ub = b, ug = grp, uk = k, us = s, us2 = s2, ubt = bt, un = n;

    CHECK(sft_step_flops(c, b, s).value() == to_double(3 * ub * us * f1));
    CHECK(grpo_step_flops(c, b, grp, s).value() == to_double(4 * ub * ug * us * f1));
    CHECK(dapo_step_flops(c, k, b, bt, grp, s).value() ==
          to_double((uk * ub + 3 * ubt) * ug * us * f1));
    CHECK(hybrid_step_flops(c, b, grp, n, s, s2).value() ==
          to_double(4 * (ub * ug * us * f1 + ub * un * us2 * f2)));
    CHECK(upt_step_flops(c, grp, b, n, s, s2).value() ==
          to_double(ug * us * f1 + 3 * (ub * us * f1 + un * us2 * f2)));
  }
}

TEST_CASE("homogeneity in the leading batch count") {
  Gen g(15);
  for (int i = 0; i < 200; ++i) {
    const auto c = g.model();
    const auto b = g.integer(1, 256);
    const double s = g.length(), s2 = g.length();
    CHECK(sft_step_flops(c, 2 * b, s).value() == 2.0 * sft_step_flops(c, b, s).value());
    CHECK(hybrid_step_flops(c, 2 * b, 3, 2, s, s2).value() ==
          doctest::Approx(2.0 * hybrid_step_flops(c, b, 3, 2, s, s2).value()).epsilon(1e-15));
    CHECK(dapo_step_flops(c, 2, 2 * b, 2 * b, 3, s).value() ==
          2.0 * dapo_step_flops(c, 2, b, b, 3, s).value());
  }
}

TEST_CASE("accumulation") {
  const std::vector<StepSpec> two = {sft(2, 1), sft(2, 1)};
  const auto cum = accumulate_run_flops(tiny_model(), two);
  REQUIRE(cum.size() == 2);
  CHECK(cum[0].value() == 132.0);
  CHECK(cum[1].value() == 264.0);
  CHECK(accumulate_run_flops(tiny_model(), std::vector<StepSpec>{sft(2, 1)})[0].value() == 132.0);
  CHECK_THROWS_AS(accumulate_run_flops(tiny_model(), std::vector<StepSpec>{}), InputDomainError);

  Gen g(16);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = g.model();
    std::vector<StepSpec> steps;
    for (int i = 0; i < 40; ++i) steps.push_back(sft(g.integer(1, 512), g.length()));
    const auto run = accumulate_run_flops(c, steps);
    long double exact = 0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      exact += sft_step_flops(c, steps[i].batch, steps[i].avg_seq_len).value();
      CHECK(std::fabs(run[i].value() - static_cast<double>(exact)) <=
            1e-9 * static_cast<double>(exact));
      if (i > 0) CHECK(run[i] >= run[i - 1]);
    }
  }
}

TEST_CASE("exaFLOP display rounding") {
  CHECK(format_exaflops(FlopCount(1365.8e18)) == "1365.8");
  CHECK(format_exaflops(FlopCount(0.25e18)) == "0.2");  // exact binary tie goes to even
  CHECK(format_exaflops(FlopCount(0)) == "0.0");
  CHECK(FlopCount(2e18).exaflops() == 2.0);
}
