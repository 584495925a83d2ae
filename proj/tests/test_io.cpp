#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

#include "lrising/errors.hpp"
#include "lrising/io.hpp"

using namespace lrising;

TEST_CASE("numbers round-trip through the CSV format") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1e3, 1e3);
  for (int k = 0; k < 2000; ++k) {
    const double x = dist(rng) * std::pow(10.0, static_cast<int>(k % 20) - 10);
    CHECK(std::strtod(io::format_number(x).c_str(), nullptr) == x);
  }
  CHECK(io::format_number(0.1) == "0.10000000000000001");
  CHECK(io::format_short(0.05) == "0.05");
  CHECK(io::format_short(3.0) == "3");
}

TEST_CASE("series and histogram CSV layout") {
  CoherenceSeries s;
  s.times = {0.0, 0.5};
  s.values = {1.0, 0.25};
  CHECK(io::series_csv(s, {{"n", "3"}}) == "# n=3\nt,C\n0,1\n0.5,0.25\n");
  s.normalized = true;
  CHECK(io::series_csv(s, {}) == "t,C_norm\n0,1\n0.5,0.25\n");

  FrequencyHistogram h;
  h.bin_edges = {-1.0, 0.0, 1.0};
  h.mass = {0.5, 0.5};
  CHECK(io::histogram_csv(h, {}) == "bin_left,bin_right,mass\n-1,0,0.5\n0,1,0.5\n");
}

TEST_CASE("key-value files with sections") {
  const auto sections = io::parse_key_values(
      "# comment\nn = 20\nalpha=3\n\n[fig2_series.csv]\nkind=series\n  range = exact \n");
  REQUIRE(sections.size() == 2);
  CHECK(sections[0].name.empty());
  CHECK(*sections[0].find("n") == "20");
  CHECK(*sections[0].find("alpha") == "3");
  CHECK(sections[1].name == "fig2_series.csv");
  CHECK(*sections[1].find("range") == "exact");
  CHECK(sections[1].find("n") == nullptr);

  const std::string rendered = io::render_key_values(sections, "banner");
  const auto again = io::parse_key_values(rendered);
  REQUIRE(again.size() == 2);
  CHECK(again[1].entries == sections[1].entries);

  CHECK_THROWS_AS(io::parse_key_values("novalue\n"), ContractViolation);
  CHECK_THROWS_AS(io::parse_key_values("=3\n"), ContractViolation);
  CHECK_THROWS_AS(io::parse_key_values("[broken\n"), ContractViolation);
}

TEST_CASE("sha256 of known inputs") {
  CHECK(io::sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(io::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("file writes report the path on failure") {
  const auto dir = std::filesystem::temp_directory_path() / "lrising_io_test";
  std::filesystem::remove_all(dir);
  io::write_file(dir / "nested" / "a.txt", "hello\n");
  CHECK(io::read_file(dir / "nested" / "a.txt") == "hello\n");

  const auto blocker = dir / "nested" / "a.txt" / "b.txt";
  try {
    io::write_file(blocker, "x");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("a.txt") != std::string::npos);
  }
  CHECK_THROWS_AS(io::read_file(dir / "missing.txt"), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("svg plots are self-contained") {
  CoherenceSeries s;
  s.times = {0.0, 1.0, 2.0};
  s.values = {1.0, 0.5, 0.2};
  const auto svg = io::series_svg(s, "demo");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("href") == std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}
