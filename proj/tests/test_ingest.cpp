#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "poixa/ingest.hpp"
#include "poixa/synthgen.hpp"

using namespace poixa;

TEST_CASE("parse_checkins maps fields directly") {
  std::istringstream in("7\t2010-10-19T23:55:27Z\t40.60\t-74.00\t16907\n");
  ParseStats stats;
  auto rows = parse_checkins(in, &stats);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].user_id == 7);
  CHECK(rows[0].lat == doctest::Approx(40.60));
  CHECK(rows[0].lon == doctest::Approx(-74.00));
  CHECK(rows[0].poi_id == 16907);
  CHECK(stats.valid == 1);
  CHECK(stats.malformed == 0);

  std::int64_t secs = 0;
  REQUIRE(parse_iso8601_utc("2010-10-19T23:55:27Z", secs));
  CHECK(rows[0].utc_time == secs);
  CHECK(format_iso8601_utc(secs) == "2010-10-19T23:55:27Z");
}

TEST_CASE("parse_checkins skips malformed lines") {
  std::istringstream in(
      "7\t2010-10-19T23:55:27Z\t91.2\t-74.00\t16907\n"   // lat out of range
      "8\t2010-10-19T23:55:27Z\t40.60\t-74.00\t16907\n"  // fine
      "not a line at all\n");
  ParseStats stats;
  auto rows = parse_checkins(in, &stats);
  CHECK(rows.size() == 1);
  CHECK(stats.malformed == 2);
  CHECK(rows[0].user_id == 8);
}

TEST_CASE("parse_checkins error paths") {
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_checkins(empty), Error);

  std::istringstream all_bad("x\ny\nz\n");
  CHECK_THROWS_AS(parse_checkins(all_bad), Error);

  // 2 of 3 lines malformed: majority malformed is CorruptDataset.
  std::istringstream corrupt(
      "8\t2010-10-19T23:55:27Z\t40.60\t-74.00\t16907\n"
      "bad line one\n"
      "bad line two\n");
  CHECK_THROWS_AS(parse_checkins(corrupt), Error);
  try {
    std::istringstream again(
        "8\t2010-10-19T23:55:27Z\t40.60\t-74.00\t16907\n"
        "bad line one\n"
        "bad line two\n");
    parse_checkins(again);
  } catch (const Error& e) {
    CHECK(e.code() == errc::corrupt_dataset);
  }
}

namespace {

CheckIn make_checkin(std::int64_t user, const std::string& when, double lat, double lon,
                     std::int64_t poi) {
  CheckIn c;
  c.user_id = user;
  REQUIRE(parse_iso8601_utc(when, c.utc_time));
  c.lat = lat;
  c.lon = lon;
  c.poi_id = poi;
  return c;
}

}  // namespace

TEST_CASE("build_trajectories sorts, filters, and cycles hours") {
  std::vector<CheckIn> rows = {
      // user 1, deliberately newest-first to exercise the ascending sort
      make_checkin(1, "2010-01-08T00:30:00Z", 40.7, -74.0, 11),  // exactly 168h after the first
      make_checkin(1, "2010-01-01T05:00:00Z", 40.7, -74.0, 12),
      make_checkin(1, "2010-01-01T00:10:00Z", 40.7, -74.0, 11),
      // user 2: only two check-ins, dropped at min_len=3
      make_checkin(2, "2010-01-01T01:00:00Z", 40.7, -74.0, 11),
      make_checkin(2, "2010-01-02T01:00:00Z", 40.7, -74.0, 12),
      // user 3: outside the bounding box entirely
      make_checkin(3, "2010-01-01T00:00:00Z", 10.0, 10.0, 13),
      make_checkin(3, "2010-01-02T00:00:00Z", 10.0, 10.0, 13),
      make_checkin(3, "2010-01-03T00:00:00Z", 10.0, 10.0, 13),
  };
  Dataset ds = build_trajectories(rows, kNycBoundingBox, 3);
  REQUIRE(ds.n_users() == 1);
  const Trajectory& t = ds.trajectories[0];
  CHECK(t.user_id == 1);
  REQUIRE(t.steps.size() == 3);
  CHECK(t.steps[0].poi_id == 11);
  CHECK(t.steps[0].raw_hour == 0);
  CHECK(t.steps[1].poi_id == 12);
  CHECK(t.steps[2].poi_id == 11);
  // 168 raw hours apart -> identical hour_of_week.
  CHECK(t.steps[2].raw_hour == 168);
  CHECK(t.steps[2].hour_of_week == t.steps[0].hour_of_week);
  CHECK(ds.registry.size() == 2);
}

TEST_CASE("build_trajectories rejects an empty survivor set") {
  std::vector<CheckIn> rows = {make_checkin(1, "2010-01-01T00:00:00Z", 10.0, 10.0, 1),
                               make_checkin(1, "2010-01-02T00:00:00Z", 10.0, 10.0, 1),
                               make_checkin(1, "2010-01-03T00:00:00Z", 10.0, 10.0, 1)};
  CHECK_THROWS_AS(build_trajectories(rows, kNycBoundingBox, 3), Error);
}

TEST_CASE("trajectory invariants hold on synthetic data") {
  SynthConfig cfg;
  cfg.n_users = 40;
  cfg.seed = 11;
  Dataset ds = synth_dataset(cfg);
  CHECK(ds.n_users() == 40);
  for (const Trajectory& t : ds.trajectories) {
    REQUIRE(t.steps.size() >= 3);
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
      const Step& s = t.steps[i];
      CHECK(s.hour_of_week == static_cast<int>(s.raw_hour % 168));
      CHECK(s.hour_of_week >= 0);
      CHECK(s.hour_of_week < 168);
      CHECK(ds.registry.contains(s.poi_id));
      if (i > 0) CHECK(s.raw_hour >= t.steps[i - 1].raw_hour);
    }
  }
  // Ascending user ids; one trajectory per user.
  for (int i = 1; i < ds.n_users(); ++i)
    CHECK(ds.trajectories[i].user_id > ds.trajectories[i - 1].user_id);
}

TEST_CASE("build_trajectories is deterministic") {
  SynthConfig cfg;
  cfg.n_users = 25;
  cfg.seed = 3;
  const std::string text = synth_checkins(cfg);
  std::istringstream in1(text), in2(text);
  Dataset a = build_trajectories(parse_checkins(in1), cfg.bbox, 5);
  Dataset b = build_trajectories(parse_checkins(in2), cfg.bbox, 5);
  CHECK(dataset_to_string(a) == dataset_to_string(b));
}

TEST_CASE("split_last basics and truncation") {
  Trajectory t;
  t.user_id = 1;
  for (int i = 0; i < 150; ++i) t.steps.push_back({100 + i, i * 2, (i * 2) % 168});

  DatasetSplit s = split_last(t, 100);
  CHECK(s.target_poi == 100 + 149);
  REQUIRE(s.input_steps.size() == 100);
  // Most recent 100 pre-target steps: indices 49..148.
  CHECK(s.input_steps.front().poi_id == 100 + 49);
  CHECK(s.input_steps.back().poi_id == 100 + 148);

  Trajectory abc;
  abc.user_id = 2;
  abc.steps = {{1, 0, 0}, {2, 1, 1}, {3, 2, 2}};
  DatasetSplit s2 = split_last(abc, 100);
  CHECK(s2.input_steps.size() == 2);
  CHECK(s2.target_poi == 3);

  Trajectory tooshort;
  tooshort.user_id = 3;
  tooshort.steps = {{1, 0, 0}, {2, 1, 1}};
  CHECK_THROWS_AS(split_last(tooshort, 100), Error);
}

TEST_CASE("dataset round-trips bit-exactly") {
  SynthConfig cfg;
  cfg.n_users = 30;
  cfg.seed = 21;
  Dataset ds = synth_dataset(cfg);
  const std::string once = dataset_to_string(ds);
  std::istringstream in(once);
  Dataset reparsed = load_dataset(in);
  CHECK(dataset_to_string(reparsed) == once);
  CHECK(reparsed.n_users() == ds.n_users());
  CHECK(reparsed.registry.size() == ds.registry.size());
}

TEST_CASE("load_dataset rejects corrupted input") {
  std::istringstream bad_header("WAT 1 1\nP 1 0 0\nU 1 3 1,0 1,1 1,2\n");
  CHECK_THROWS_AS(load_dataset(bad_header), Error);

  std::istringstream bad_monotone("PXD1 1 1\nP 1 0 0\nU 1 3 1,5 1,4 1,6\n");
  CHECK_THROWS_AS(load_dataset(bad_monotone), Error);

  std::istringstream unknown_poi("PXD1 1 1\nP 1 0 0\nU 1 3 2,0 2,1 2,2\n");
  CHECK_THROWS_AS(load_dataset(unknown_poi), Error);
}

TEST_CASE("gzip-compressed input is read transparently") {
  // Plain files pass through unchanged.
  const std::string plain = "plain_input_test.txt";
  {
    std::ofstream out(plain, std::ios::binary);
    out << "hello\nworld\n";
  }
  CHECK(read_text_file_auto(plain) == "hello\nworld\n");
  std::remove(plain.c_str());

  // Gzip files are inflated.
  SynthConfig cfg;
  cfg.n_users = 10;
  cfg.seed = 4;
  const std::string text = synth_checkins(cfg);
  const std::string gz_path = "synth_input_test.txt.gz";
  gzFile gz = gzopen(gz_path.c_str(), "wb");
  REQUIRE(gz != nullptr);
  gzwrite(gz, text.data(), static_cast<unsigned>(text.size()));
  gzclose(gz);
  CHECK(read_text_file_auto(gz_path) == text);
  std::remove(gz_path.c_str());
}
