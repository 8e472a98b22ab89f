#include "doctest.h"
#include "tilesync/errors.hpp"
#include "tilesync/transcript.hpp"

using namespace tilesync;

namespace {

BarrierTranscript make_transcript(const std::vector<Cycle>& requests,
                                  const std::vector<Cycle>& resumes) {
  BarrierTranscript t;
  for (size_t i = 0; i < requests.size(); ++i) {
    t.events.push_back({requests[i], static_cast<int>(i),
                        BarrierTranscript::Event::Kind::kRequest});
  }
  for (size_t i = 0; i < resumes.size(); ++i) {
    t.events.push_back({resumes[i], static_cast<int>(i),
                        BarrierTranscript::Event::Kind::kResume});
  }
  return t;
}

}  // namespace

TEST_CASE("uniform requests and resumes pass") {
  const auto v = check_barrier_order(make_transcript({0, 0, 0, 0}, {6, 6, 6, 6}));
  CHECK(v.pass);
}

TEST_CASE("an early resume fails with the violating pe and cycle") {
  const auto v = check_barrier_order(make_transcript({0, 0, 0, 9}, {5, 5, 5, 15}));
  CHECK_FALSE(v.pass);
  CHECK(v.violating_cycle == 5);
  CHECK(v.violating_pe == 0);
}

TEST_CASE("a single-PE domain passes vacuously when resume > request") {
  CHECK(check_barrier_order(make_transcript({3}, {4})).pass);
  CHECK_FALSE(check_barrier_order(make_transcript({3}, {3})).pass);
}

TEST_CASE("incomplete transcripts are malformed input") {
  BarrierTranscript missing_resume = make_transcript({0, 0}, {6});
  CHECK_THROWS_AS(check_barrier_order(missing_resume), ConfigError);

  BarrierTranscript doubled = make_transcript({0}, {6});
  doubled.events.push_back({1, 0, BarrierTranscript::Event::Kind::kRequest});
  CHECK_THROWS_AS(check_barrier_order(doubled), ConfigError);

  CHECK_THROWS_AS(check_barrier_order(BarrierTranscript{}), ConfigError);
}

TEST_CASE("exhaustive small-mesh sweep is clean") {
  for (int k : {2, 4}) {
    const CheckReport report = exhaustive_small_check(k);
    CHECK(report.ok());
    // every node appears as a domain root: zero-skew + per-member skews +
    // four rotations per node
    const int nodes = k * k - 1;
    CHECK(report.scenarios > nodes);
    CHECK(report.text.find("FAIL") == std::string::npos);
  }
}
