#include <gtest/gtest.h>

#include <filesystem>

#include "fdcol/io.hpp"

using namespace fdcol;

namespace {

Grid sample_grid(int d, std::int64_t levels) {
  const Box box = d == 1 ? Box(Site{-3}, Site{12}) : Box(Site{-2, 5}, Site{7, 11});
  Grid g(box);
  for (std::size_t i = 0; i < g.size(); ++i) g.values[i] = static_cast<std::int64_t>((i * 7919) % static_cast<std::size_t>(levels)) + 1;
  return g;
}

}  // namespace

TEST(Formats, ParseAndName) {
  for (const auto* n : {"pgm", "ppm", "csv", "json"}) EXPECT_EQ(format_name(parse_format(n)), n);
  EXPECT_THROW(parse_format("png"), std::invalid_argument);
  EXPECT_EQ(format_of_path("a/b.c/final.csv"), Format::csv);
  EXPECT_THROW(format_of_path("final"), std::invalid_argument);
}

TEST(RoundTrip, AllFormatsLosslessAtFewLevels) {
  for (int d : {1, 2})
    for (Format f : {Format::csv, Format::json, Format::pgm, Format::ppm}) {
      const Grid g = sample_grid(d, 5);
      ImageInfo info;
      const std::string bytes = encode_grid(g, f, &info);
      EXPECT_TRUE(info.lossless);
      EXPECT_EQ(decode_grid(bytes, f), g) << format_name(f) << " d=" << d;
    }
}

TEST(RoundTrip, CsvAndJsonAnyValues) {
  Grid g(Box(Site{0, 0, 0}, Site{2, 1, 3}));
  for (std::size_t i = 0; i < g.size(); ++i) g.values[i] = static_cast<std::int64_t>(i) * 1'000'000'007 - 5;
  EXPECT_EQ(decode_grid(encode_grid(g, Format::csv), Format::csv), g);
  EXPECT_EQ(decode_grid(encode_grid(g, Format::json), Format::json), g);
  EXPECT_THROW(encode_grid(g, Format::pgm), std::invalid_argument);
}

TEST(Pgm, ManyLevelsAreLossy) {
  const Grid g = sample_grid(2, 1000);
  ImageInfo info;
  const auto bytes = grid_pgm(g, &info);
  EXPECT_FALSE(info.lossless);
  EXPECT_FALSE(info.note.empty());
  const Grid back = parse_pgm(bytes);
  EXPECT_EQ(back.box, g.box);
  EXPECT_NE(back, g);
}

TEST(Ppm, PaletteAndHashed) {
  ImageInfo info;
  const auto small = sample_grid(2, 5);
  const auto bytes = grid_ppm(small, &info);
  EXPECT_FALSE(info.hashed);
  const auto p = detail::parse_pnm(bytes);
  std::istringstream vs(detail::comment_value(p, "values"));
  std::size_t n = 0;
  for (std::int64_t v; vs >> v;) ++n;
  EXPECT_LE(n, 5u);

  const auto big = sample_grid(2, 40);
  const auto hb = grid_ppm(big, &info);
  EXPECT_TRUE(info.hashed);
  EXPECT_EQ(parse_ppm(hb), big);
}

TEST(Conversions, TupleAndPatchColours) {
  SiteConfig<TupleColour> t(Box(Site{0}, Site{1}));
  t.values = {{1, 1}, {4, 4}};
  EXPECT_EQ(to_grid(t).values, (std::vector<std::int64_t>{1, 16}));
  SiteConfig<std::uint8_t> j(Box(Site{0}, Site{2}), 0);
  j.values[1] = 1;
  EXPECT_EQ(to_grid(j).values, (std::vector<std::int64_t>{0, 1, 0}));
}

TEST(Malformed, Rejected) {
  EXPECT_THROW(parse_csv(""), std::runtime_error);
  EXPECT_THROW(parse_csv("x1,value\n0,1\n2,1\n"), std::runtime_error);
  EXPECT_THROW(grid_from_json(json{{"kind", "law"}}), std::runtime_error);
  EXPECT_THROW(parse_pgm("P6\n1 1\n255\n\0"), std::runtime_error);
  EXPECT_THROW(read_file("/nonexistent/fdcol"), std::runtime_error);
}

TEST(Digest, Sha256KnownValues) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Files, WriteReadGrid) {
  const auto dir = std::filesystem::temp_directory_path() / "fdcol_test_io";
  std::filesystem::create_directories(dir);
  const Grid g = sample_grid(2, 4);
  for (const auto* ext : {"csv", "json", "pgm", "ppm"}) {
    const std::string path = (dir / (std::string("g.") + ext)).string();
    write_file(path, encode_grid(g, parse_format(ext)));
    EXPECT_EQ(read_grid(path), g) << ext;
  }
  std::filesystem::remove_all(dir);
}

TEST(Manifest, Fields) {
  RunManifest m;
  m.seed = 3;
  m.dim = 2;
  m.spec = spec_json(PipelineSpec::make(2));
  m.outputs.push_back({"final.ppm", "ppm", sha256_hex("x"), ""});
  const auto j = m.to_json();
  EXPECT_EQ(j.at("kind"), "manifest");
  EXPECT_EQ(j.at("spec").at("net_scale"), 64);
  EXPECT_EQ(j.at("outputs").at(0).at("sha256").get<std::string>().size(), 64u);
  EXPECT_TRUE(j.at("versions").contains("libsodium"));
}
