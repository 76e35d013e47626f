#include <gtest/gtest.h>

#include "fdcol/io.hpp"
#include "fdcol/pipeline.hpp"
#include "fdcol/verify.hpp"

using namespace fdcol;

TEST(Stages, ParseAndName) {
  for (const auto* s : {"baseline", "nets", "clusters", "tiling", "patchwork", "final"}) EXPECT_EQ(stage_name(parse_stage(s)), s);
  EXPECT_THROW(parse_stage("reduce"), std::invalid_argument);
}

TEST(Windows, NestedByStageRadii) {
  const auto spec = PipelineSpec::make(1);
  const Box in(Site{0}, Site{99});
  const auto w = plan_windows(spec, in);
  EXPECT_EQ(w.patch, in.grow(8));
  EXPECT_EQ(w.tiling, in.grow(8 + 3));
  EXPECT_EQ(w.cluster_out, in.grow(8 + 3 + 8));
  EXPECT_EQ(w.nets, in.grow(8 + 3 + 8 + 4));
  EXPECT_EQ(w.arrows, in.grow(8 + 3 + 8 + 4 + 32));
  EXPECT_EQ(w.field, in.grow(8 + 3 + 8 + 4 + 32 + 1));
  EXPECT_EQ(w.output(Stage::tiling), w.tiling);
  EXPECT_THROW(plan_windows(spec, Box::cube(2, 4)), std::invalid_argument);
}

TEST(Feasibility, MessageStatesRequirement) {
  const auto spec = PipelineSpec::make(2);
  try {
    check_feasible(spec, Box::cube(2, 16384), Stage::final);
    FAIL() << "expected infeasible";
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("infeasible"), std::string::npos);
    EXPECT_NE(msg.find("sites"), std::string::npos);
  }
  EXPECT_NO_THROW(check_feasible(spec, Box::cube(2, 8192), Stage::baseline));
  EXPECT_NO_THROW(check_feasible(spec, Box::cube(2, 64), Stage::final));
}

TEST(Run, LineFinalColouring) {
  const auto spec = PipelineSpec::make(1);
  const Box in(Site{0}, Site{4095});
  const auto r = run_pipeline(spec, 5, in);
  ASSERT_TRUE(r.final_colours.has_value());
  EXPECT_EQ(r.final_colours->box, in);
  EXPECT_TRUE(check_proper(*r.final_colours, 1).pass);
  EXPECT_TRUE(check_max_value<std::int64_t>(*r.final_colours, 3).pass);
  EXPECT_EQ(r.timings.size(), 5u);
}

TEST(Run, StopsAtRequestedStage) {
  const auto spec = PipelineSpec::make(1);
  const Box in(Site{0}, Site{199});
  const auto t = run_pipeline(spec, 2, in, Stage::tiling);
  EXPECT_TRUE(t.tiling.has_value());
  EXPECT_FALSE(t.patch.has_value());
  EXPECT_FALSE(t.final_colours.has_value());
  EXPECT_EQ(t.tiling->box, t.windows.tiling);
  const auto b = run_pipeline(spec, 2, in, Stage::baseline);
  EXPECT_TRUE(b.baseline.has_value());
  EXPECT_FALSE(b.nets.has_value());
  // a longer run agrees with the stopped one on the shared stage
  const auto f = run_pipeline(spec, 2, in);
  EXPECT_EQ(*f.tiling, *t.tiling);
}

TEST(Run, DeterministicAcrossThreadCounts) {
  const auto spec = PipelineSpec::make(2, 1);
  const Box in = Box::cube(2, 8);
  const auto a = run_pipeline(spec, 11, in, Stage::final, 1);
  const auto b = run_pipeline(spec, 11, in, Stage::final, 4);
  ASSERT_TRUE(a.final_colours && b.final_colours);
  EXPECT_EQ(sha256_hex(encode_grid(*a.final_colours, Format::csv)), sha256_hex(encode_grid(*b.final_colours, Format::csv)));
  EXPECT_EQ(a.nets->union_net, b.nets->union_net);
  EXPECT_TRUE(check_proper(*a.final_colours, 1).pass);
  EXPECT_TRUE(check_max_value<std::int64_t>(*a.final_colours, 5).pass);
}

TEST(Run, SeedsDiffer) {
  const auto spec = PipelineSpec::make(1);
  const Box in(Site{0}, Site{499});
  EXPECT_NE(*run_pipeline(spec, 1, in).final_colours, *run_pipeline(spec, 2, in).final_colours);
}
