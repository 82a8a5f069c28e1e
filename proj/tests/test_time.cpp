#include "stargaze/time.hpp"

#include "stargaze/error.hpp"
#include "stargaze/rng.hpp"

#include <doctest.h>

using namespace stargaze;

TEST_CASE("ISO-8601 parse and format are inverses") {
  CHECK(parse_iso8601("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_iso8601("2016-04-25T00:00:00Z") == 1461542400);
  CHECK(format_iso8601(1461542400) == "2016-04-25T00:00:00Z");
  SplitMix64 rng(91);
  for (int i = 0; i < 500; ++i) {
    const Timestamp t = static_cast<Timestamp>(rng.bounded(4'000'000'000ULL));
    CHECK(parse_iso8601(format_iso8601(t)) == t);
  }
}

TEST_CASE("leap days format correctly") {
  const Timestamp t = parse_iso8601("2016-02-29T12:30:45Z");
  CHECK(format_iso8601(t) == "2016-02-29T12:30:45Z");
  CHECK(parse_iso8601("2016-03-01T00:00:00Z") - parse_iso8601("2016-02-28T00:00:00Z") ==
        2 * kSecondsPerDay);
}

TEST_CASE("malformed timestamps are rejected") {
  CHECK_THROWS_AS(parse_iso8601(""), Error);
  CHECK_THROWS_AS(parse_iso8601("2016-04-25"), Error);
  CHECK_THROWS_AS(parse_iso8601("2016-04-25 00:00:00Z"), Error);
  CHECK_THROWS_AS(parse_iso8601("2016-13-25T00:00:00Z"), Error);
  CHECK_THROWS_AS(parse_iso8601("2016-04-25T00:00:00+01"), Error);
}
