/*
 * Copyright 2026 The rrarb Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <catch2/catch_amalgamated.hpp>

#include "rrarb/arbiter.hpp"
#include "rrarb/workload.hpp"

using namespace rrarb;

namespace {

RequestVector bits(std::initializer_list<int> vals) {
  RequestVector v;
  for (int b : vals) v.push_back(b != 0);
  return v;
}

ArbiterConfig skip_scan(std::size_t n, std::optional<std::uint64_t> slice = 1) {
  return {n, slice, Policy::kSkipScan};
}

ArbiterConfig token_rotate(std::size_t n,
                           std::optional<std::uint64_t> slice = 1) {
  return {n, slice, Policy::kTokenRotate};
}

}  // namespace

TEST_CASE("new_arbiter returns the power-on state", "[arbiter]") {
  ArbiterState s = new_arbiter(skip_scan(6));
  CHECK(s.token_index == 0);
  CHECK(s.fsm == Fsm::kIdle);
  CHECK(s.cycle_count == 0);
  CHECK_FALSE(s.slice_remaining.has_value());
}

TEST_CASE("new_arbiter accepts a single-port arbiter", "[arbiter]") {
  CHECK_NOTHROW(new_arbiter(skip_scan(1)));
}

TEST_CASE("new_arbiter rejects invalid configurations", "[arbiter]") {
  CHECK_THROWS_AS(new_arbiter(skip_scan(0)), ConfigError);
  CHECK_THROWS_AS(new_arbiter(skip_scan(4, 0)), ConfigError);
}

TEST_CASE("compute_ack is the token AND request rule", "[arbiter]") {
  CHECK_FALSE(compute_ack(false, true));  // turn miss, denied
  CHECK_FALSE(compute_ack(true, false));  // turn miss, denied
  CHECK(compute_ack(true, true));         // turn hit, permitted
  CHECK_FALSE(compute_ack(false, false));
}

TEST_CASE("skip-scan grants the first requester cyclically from the pointer",
          "[arbiter]") {
  ArbiterConfig cfg = skip_scan(4);
  ArbiterState s = new_arbiter(cfg);
  s.token_index = 2;
  StepResult r = step(cfg, s, bits({1, 0, 0, 1}));
  CHECK(r.output.grant.port() == 3);
  CHECK(r.output.event == StepEvent{EventKind::kTurnHit, 3});
  CHECK(r.state.fsm == Fsm::kGranted);
  CHECK(r.state.grantee == 3);
  CHECK(r.state.token_index == 0);  // grantee drops to lowest priority
}

TEST_CASE("no requester means no grant and an idle FSM", "[arbiter]") {
  for (Policy policy : {Policy::kSkipScan, Policy::kTokenRotate}) {
    ArbiterConfig cfg{4, 1, policy};
    ArbiterState s = new_arbiter(cfg);
    StepResult r = step(cfg, s, bits({0, 0, 0, 0}));
    CHECK_FALSE(r.output.grant.any());
    CHECK(r.state.fsm == Fsm::kIdle);
  }
}

TEST_CASE("token-rotate wastes the slot when its owner is silent",
          "[arbiter]") {
  ArbiterConfig cfg = token_rotate(4, 1);
  ArbiterState s = new_arbiter(cfg);
  s.token_index = 1;
  StepResult r = step(cfg, s, bits({0, 0, 1, 0}));
  CHECK_FALSE(r.output.grant.any());
  CHECK(r.output.event == StepEvent{EventKind::kTurnMiss, 1});
  CHECK(r.state.token_index == 2);
}

TEST_CASE("reset dominates any state and clears the pointer", "[arbiter]") {
  for (Policy policy : {Policy::kSkipScan, Policy::kTokenRotate}) {
    ArbiterConfig cfg{4, 2, policy};
    ArbiterState s = new_arbiter(cfg);
    s.token_index = 3;
    s.fsm = Fsm::kGranted;
    s.grantee = 2;
    s.slice_remaining = 1;
    StepResult r = step(cfg, s, bits({1, 1, 1, 1}), /*reset=*/true);
    CHECK_FALSE(r.output.grant.any());
    CHECK(r.output.event.kind == EventKind::kNone);
    CHECK(r.state.fsm == Fsm::kIdle);
    CHECK(r.state.token_index == 0);
    CHECK(r.state.cycle_count == 1);
  }
}

TEST_CASE("a bounded slice holds for exactly its length", "[arbiter]") {
  ArbiterConfig cfg = skip_scan(3, 3);
  ArbiterState s = new_arbiter(cfg);
  const RequestVector reqs = bits({1, 1, 1});

  StepResult r = step(cfg, s, reqs);
  CHECK(r.output.grant.port() == 0);
  CHECK(r.output.event.kind == EventKind::kTurnHit);
  s = r.state;

  for (int held = 0; held < 2; ++held) {  // two more cycles of the slice
    r = step(cfg, s, reqs);
    CHECK(r.output.grant.port() == 0);
    CHECK(r.output.event.kind == EventKind::kNone);
    s = r.state;
  }

  r = step(cfg, s, reqs);  // slice over, next port takes over this cycle
  CHECK(r.output.event == StepEvent{EventKind::kSliceExpired, 0});
  CHECK(r.output.grant.port() == 1);
}

TEST_CASE("an unlimited slice holds until the request drops", "[arbiter]") {
  ArbiterConfig cfg = skip_scan(3, std::nullopt);
  ArbiterState s = new_arbiter(cfg);
  for (int c = 0; c < 10; ++c) {
    StepResult r = step(cfg, s, bits({1, 1, 0}));
    CHECK(r.output.grant.port() == 0);
    s = r.state;
  }
  // drop the request: released and re-granted in the same cycle
  StepResult r = step(cfg, s, bits({0, 1, 0}));
  CHECK(r.output.event == StepEvent{EventKind::kReleasedByRequest, 0});
  CHECK(r.output.grant.port() == 1);
}

TEST_CASE("token-rotate regrants only on the cycle after a release",
          "[arbiter]") {
  ArbiterConfig cfg = token_rotate(3, std::nullopt);
  ArbiterState s = new_arbiter(cfg);
  StepResult r = step(cfg, s, bits({1, 1, 0}));
  REQUIRE(r.output.grant.port() == 0);
  s = r.state;

  r = step(cfg, s, bits({0, 1, 0}));  // port 0 terminates by request
  CHECK(r.output.event == StepEvent{EventKind::kReleasedByRequest, 0});
  CHECK_FALSE(r.output.grant.any());  // strict slot model: dead cycle
  CHECK(r.state.token_index == 1);
  s = r.state;

  r = step(cfg, s, bits({0, 1, 0}));
  CHECK(r.output.grant.port() == 1);
  CHECK(r.output.event == StepEvent{EventKind::kTurnHit, 1});
}

TEST_CASE("a slice expiring on a silent owner still ends as an expiry",
          "[arbiter]") {
  ArbiterConfig cfg = skip_scan(2, 1);
  ArbiterState s = new_arbiter(cfg);
  StepResult r = step(cfg, s, bits({1, 0}));
  REQUIRE(r.output.grant.port() == 0);
  s = r.state;
  // request drops on the same edge the slice runs out: expiry wins
  r = step(cfg, s, bits({0, 1}));
  CHECK(r.output.event == StepEvent{EventKind::kSliceExpired, 0});
  CHECK(r.output.grant.port() == 1);
}

TEST_CASE("the skip-scan pointer is frozen while idle", "[arbiter]") {
  ArbiterConfig cfg = skip_scan(5);
  ArbiterState s = new_arbiter(cfg);
  s.token_index = 3;
  for (int c = 0; c < 4; ++c) {
    StepResult r = step(cfg, s, bits({0, 0, 0, 0, 0}));
    CHECK(r.state.token_index == 3);
    s = r.state;
  }
}

TEST_CASE("the token-rotate pointer advances through idle cycles",
          "[arbiter]") {
  ArbiterConfig cfg = token_rotate(3);
  ArbiterState s = new_arbiter(cfg);
  std::size_t owner = 0;
  for (int c = 0; c < 5; ++c) {
    StepResult r = step(cfg, s, bits({0, 0, 0}));
    CHECK(r.output.event == StepEvent{EventKind::kTurnMiss, owner});
    owner = (owner + 1) % 3;
    CHECK(r.state.token_index == owner);
    s = r.state;
  }
}

TEST_CASE("step rejects a mis-sized request vector", "[arbiter]") {
  ArbiterConfig cfg = skip_scan(4);
  ArbiterState s = new_arbiter(cfg);
  CHECK_THROWS_AS(step(cfg, s, bits({1, 0})), DimensionError);
}

TEST_CASE("run over an empty trace yields no outputs", "[arbiter]") {
  ArbiterConfig cfg = skip_scan(4);
  ArbiterState s = new_arbiter(cfg);
  CHECK(run(cfg, s, {}).empty());
}

TEST_CASE("run grants a lone requester immediately", "[arbiter]") {
  ArbiterConfig cfg = skip_scan(3);
  ArbiterState s = new_arbiter(cfg);
  std::vector<CycleInput> trace = {{false, bits({1, 0, 0})}};
  std::vector<StepOutput> outputs = run(cfg, s, trace);
  REQUIRE(outputs.size() == 1);
  CHECK(outputs[0].event == StepEvent{EventKind::kTurnHit, 0});
  CHECK(outputs[0].grant.port() == 0);
}

TEST_CASE("saturated skip-scan with unit slice rotates every cycle",
          "[arbiter]") {
  ArbiterConfig cfg = skip_scan(3, 1);
  ArbiterState s = new_arbiter(cfg);
  std::vector<CycleInput> trace(9, {false, bits({1, 1, 1})});
  std::vector<StepOutput> outputs = run(cfg, s, trace);
  for (std::size_t i = 0; i < outputs.size(); ++i)
    CHECK(outputs[i].grant.port() == i % 3);
}

TEST_CASE("run names the offending cycle in dimension errors", "[arbiter]") {
  ArbiterConfig cfg = skip_scan(3);
  ArbiterState s = new_arbiter(cfg);
  std::vector<CycleInput> trace = {{false, bits({1, 1, 1})},
                                   {false, bits({1, 1})}};
  CHECK_THROWS_WITH(run(cfg, s, trace),
                    Catch::Matchers::ContainsSubstring("cycle 1"));
}

TEST_CASE("step is a pure function of state and inputs", "[arbiter]") {
  SplitMix64 rng(0x5eedf00dULL);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.next() % 8;
    ArbiterConfig cfg{n, 1 + rng.next() % 3,
                      (rng.next() & 1) ? Policy::kSkipScan
                                       : Policy::kTokenRotate};
    ArbiterState s = new_arbiter(cfg);
    s.token_index = rng.next() % n;
    RequestVector reqs(n);
    for (std::size_t p = 0; p < n; ++p) reqs[p] = rng.next() & 1;
    const bool reset = (rng.next() & 7) == 0;

    StepResult a = step(cfg, s, reqs, reset);
    StepResult b = step(cfg, s, reqs, reset);
    CHECK(a.output == b.output);
    CHECK(a.state.token_index == b.state.token_index);
    CHECK(a.state.fsm == b.state.fsm);
    CHECK(a.state.slice_remaining == b.state.slice_remaining);
  }
}

TEST_CASE("randomized safety: one-hot grants that imply a request",
          "[arbiter][property]") {
  SplitMix64 rng(0x0a11f00dULL);
  for (int episode = 0; episode < 100; ++episode) {
    const std::size_t n = 1 + rng.next() % 16;
    const std::uint64_t slice_pick = rng.next() % 5;
    ArbiterConfig cfg{
        n,
        slice_pick == 0 ? std::optional<std::uint64_t>{}
                        : std::optional<std::uint64_t>{slice_pick},
        (rng.next() & 1) ? Policy::kSkipScan : Policy::kTokenRotate};
    ArbiterState s = new_arbiter(cfg);
    for (int c = 0; c < 300; ++c) {
      RequestVector reqs(n);
      for (std::size_t p = 0; p < n; ++p) reqs[p] = rng.next() & 1;
      const bool reset = (rng.next() & 31) == 0;
      StepResult r = step(cfg, s, reqs, reset);
      s = r.state;

      std::size_t set_bits = 0;
      for (std::size_t p = 0; p < n; ++p) {
        if (r.output.grant.bit(p)) {
          ++set_bits;
          REQUIRE(reqs[p]);  // grant implies request
        }
      }
      REQUIRE(set_bits <= 1);
      if (reset) REQUIRE(set_bits == 0);  // reset dominance
    }
  }
}

TEST_CASE("skip-scan is work conserving", "[arbiter][property]") {
  SplitMix64 rng(0xc0ffee11ULL);
  for (int episode = 0; episode < 50; ++episode) {
    const std::size_t n = 1 + rng.next() % 8;
    ArbiterConfig cfg = skip_scan(n, 1 + rng.next() % 4);
    ArbiterState s = new_arbiter(cfg);
    for (int c = 0; c < 200; ++c) {
      RequestVector reqs(n);
      for (std::size_t p = 0; p < n; ++p) reqs[p] = rng.next() & 1;
      StepResult r = step(cfg, s, reqs);
      s = r.state;
      if (any_request(reqs)) REQUIRE(r.output.grant.any());
    }
  }
}

TEST_CASE("round-robin exactness under saturation", "[arbiter][property]") {
  for (Policy policy : {Policy::kSkipScan, Policy::kTokenRotate}) {
    for (std::size_t n : {1u, 2u, 3u, 5u}) {
      for (std::uint64_t slice : {1u, 2u, 4u}) {
        ArbiterConfig cfg{n, slice, policy};
        ArbiterState s = new_arbiter(cfg);
        const std::size_t rounds = 3;
        const std::size_t total = rounds * n * slice;
        std::vector<std::size_t> grants(n, 0);
        std::optional<std::size_t> last;
        for (std::size_t c = 0; c < total; ++c) {
          StepResult r = step(cfg, s, RequestVector(n, true));
          s = r.state;
          REQUIRE(r.output.grant.any());
          const std::size_t p = *r.output.grant.port();
          ++grants[p];
          if (last && p != *last)
            REQUIRE(p == (*last + 1) % n);  // strict cyclic order
          last = p;
        }
        for (std::size_t p = 0; p < n; ++p)
          REQUIRE(grants[p] == rounds * slice);
      }
    }
  }
}

TEST_CASE("a continuous requester is granted within N*S cycles",
          "[arbiter][property]") {
  SplitMix64 rng(0x57a2437eULL);
  for (int episode = 0; episode < 60; ++episode) {
    const std::size_t n = 2 + rng.next() % 7;
    const std::uint64_t slice = 1 + rng.next() % 4;
    const std::size_t hero = rng.next() % n;
    ArbiterConfig cfg = skip_scan(n, slice);
    ArbiterState s = new_arbiter(cfg);
    std::uint64_t waited = 0;
    for (int c = 0; c < 400; ++c) {
      RequestVector reqs(n);
      for (std::size_t p = 0; p < n; ++p) reqs[p] = rng.next() & 1;
      reqs[hero] = true;
      StepResult r = step(cfg, s, reqs);
      s = r.state;
      if (r.output.grant.bit(hero)) {
        waited = 0;
      } else {
        ++waited;
        REQUIRE(waited <= n * slice);
      }
    }
  }
}

TEST_CASE("token-rotate never wastes a pending cycle silently",
          "[arbiter][property]") {
  SplitMix64 rng(0x70c3207aULL);
  for (int episode = 0; episode < 50; ++episode) {
    const std::size_t n = 1 + rng.next() % 6;
    ArbiterConfig cfg = token_rotate(n, 1 + rng.next() % 3);
    ArbiterState s = new_arbiter(cfg);
    for (int c = 0; c < 200; ++c) {
      RequestVector reqs(n);
      for (std::size_t p = 0; p < n; ++p) reqs[p] = rng.next() & 1;
      StepResult r = step(cfg, s, reqs);
      s = r.state;
      if (!any_request(reqs)) continue;
      // every pending cycle is accounted for: a grant was issued or
      // held, the slot owner missed its turn, or a tenure ended
      const bool granted = r.output.grant.any();
      const bool missed = r.output.event.kind == EventKind::kTurnMiss;
      const bool terminated =
          r.output.event.kind == EventKind::kSliceExpired ||
          r.output.event.kind == EventKind::kReleasedByRequest;
      REQUIRE((granted || missed || terminated));
    }
  }
}

TEST_CASE("cycle counter is monotone", "[arbiter]") {
  ArbiterConfig cfg = skip_scan(2);
  ArbiterState s = new_arbiter(cfg);
  for (std::uint64_t c = 1; c <= 10; ++c) {
    s = step(cfg, s, bits({1, 0}), c % 3 == 0).state;
    CHECK(s.cycle_count == c);
  }
}
