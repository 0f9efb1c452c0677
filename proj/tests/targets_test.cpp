// Copyright 2026 The relfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <random>
#include <string>

#include "relfuzz/targets/registry.hpp"
#include "toy_checks.hpp"

namespace relfuzz {
namespace {

using targets::Chunks;
using targets::NestedCmd;
using targets::ObjFile;
using targets::Tlv;

class EachToy : public ::testing::TestWithParam<std::string_view> {
 protected:
  std::unique_ptr<ToyTarget> target = targets::make_toy_target(GetParam());
};

TEST_P(EachToy, SeedCoversEveryPassCheckpoint) {
  const CoverageSet cov = target->execute(target->seed());
  for (const Checkpoint &c : target->checkpoints()) {
    EXPECT_TRUE(cov.contains(c.feature)) << c.name;
  }
}

TEST_P(EachToy, GroundTruthHoldsOnSeed) {
  const Bytes seed = target->seed();
  for (const RelationField &r : target->ground_truth()) {
    ASSERT_TRUE(r.fits(seed.size()));
    EXPECT_EQ(read_field(seed, r), r.b - r.a);
  }
}

TEST_P(EachToy, Deterministic) {
  std::mt19937_64 gen(GetParam().size());
  Bytes in = target->seed();
  for (int round = 0; round < 20; ++round) {
    const CoverageSet first = target->execute(in);
    for (int i = 0; i < 50; ++i) ASSERT_EQ(target->execute(in), first);
    in[gen() % in.size()] = static_cast<uint8_t>(gen());
  }
}

TEST_P(EachToy, TotalOnArbitraryBytes) {
  std::mt19937_64 gen(17);
  for (int i = 0; i < 2000; ++i) {
    Bytes in(gen() % 96);
    for (auto &b : in) b = static_cast<uint8_t>(gen());
    if (!in.empty() && gen() % 2) {
      const Bytes seed = target->seed();
      std::copy_n(seed.begin(), std::min(seed.size(), in.size()), in.begin());
    }
    EXPECT_NO_THROW(target->execute(in));
  }
}

TEST_P(EachToy, ResizeClosure) {
  EXPECT_EQ(testing::resize_closure_failures(*target),
            std::vector<std::string>{});
  EXPECT_EQ(testing::collapse_failures(*target), std::vector<std::string>{});
}

INSTANTIATE_TEST_SUITE_P(Toys, EachToy,
                         ::testing::Values("nestedcmd", "chunks", "tlv",
                                           "objfile", "echo"));

TEST(NestedCmd, SeedFeatures) {
  NestedCmd t;
  const Bytes seed = t.seed();
  EXPECT_EQ(seed.size(), 47u);
  const CoverageSet cov = t.execute(seed);
  for (Feature f : {NestedCmd::kChk1Pass, NestedCmd::kChk2Pass,
                    NestedCmd::kChk3Pass, NestedCmd::kHandlerPcrEvent}) {
    EXPECT_TRUE(cov.contains(f)) << t.feature_name(f);
  }
  EXPECT_TRUE(cov.contains(NestedCmd::kBucketBase + 18 / 8));
  const std::string text(seed.end() - 18, seed.end());
  EXPECT_EQ(text, "Hello World Event!");
}

TEST(NestedCmd, CmdSizePlusOneFailsCheck1) {
  NestedCmd t;
  Bytes in = t.seed();
  in[5] += 1;
  EXPECT_FALSE(t.execute(in).contains(NestedCmd::kChk1Pass));
}

TEST(NestedCmd, EmptyInput) {
  NestedCmd t;
  EXPECT_EQ(t.execute({}),
            (CoverageSet{NestedCmd::kEntry, NestedCmd::kErrShortHeader}));
}

TEST(NestedCmd, CheckCascade) {
  NestedCmd t;
  std::mt19937_64 gen(23);
  const Bytes seed = t.seed();
  for (int i = 0; i < 5000; ++i) {
    Bytes in = seed;
    for (int k = 0; k < 3; ++k) in[gen() % in.size()] = static_cast<uint8_t>(gen());
    const CoverageSet cov = t.execute(in);
    if (cov.contains(NestedCmd::kChk3Pass)) {
      EXPECT_TRUE(cov.contains(NestedCmd::kChk2Pass));
    }
    if (cov.contains(NestedCmd::kChk2Pass)) {
      EXPECT_TRUE(cov.contains(NestedCmd::kChk1Pass));
    }
  }
}

TEST(NestedCmd, ShortAuthAndEmptyEventAreRejected) {
  NestedCmd t;
  Bytes in;
  internal::put_be(in, 0x8001, 2);
  internal::put_be(in, 18 + 4 + 2, 4);
  internal::put_be(in, NestedCmd::kPcrEvent, 4);
  internal::put_be(in, 0, 4);
  internal::put_be(in, 4, 4);
  internal::put_be(in, 0, 4);
  internal::put_be(in, 0, 2);
  EXPECT_TRUE(t.execute(in).contains(NestedCmd::kErrAuthShort));

  Bytes empty = t.seed();
  empty.resize(29);
  empty[5] = 29;
  empty[27] = 0;
  empty[28] = 0;
  const CoverageSet cov = t.execute(empty);
  EXPECT_TRUE(cov.contains(NestedCmd::kErrEmptyEvent));
  EXPECT_FALSE(cov.contains(NestedCmd::kChk3Pass));
}

TEST(Chunks, SeedLayout) {
  Chunks t;
  const Bytes seed = t.seed();
  const CoverageSet cov = t.execute(seed);
  EXPECT_TRUE(cov.contains(Chunks::kMagicOk));
  EXPECT_TRUE(cov.contains(Chunks::kFixdPass));
  EXPECT_TRUE(cov.contains(Chunks::kTypeVard));
  EXPECT_TRUE(cov.contains(Chunks::kTypeEnd));
  EXPECT_FALSE(cov.contains(Chunks::kTypeUnknown));
}

// Bumping the FIXD size can never be undone by inserting bytes anywhere.
TEST(Chunks, FixdSizeIsNotRestorable) {
  Chunks t;
  const Bytes seed = t.seed();
  for (uint64_t delta : {uint64_t{1}, uint64_t{0xff}}) {
    Bytes probed = seed;
    write_field(probed, 4, 4, Endianness::kBig, 8 + delta);
    ASSERT_FALSE(t.execute(probed).contains(Chunks::kFixdPass));
    for (size_t i = 0; i <= probed.size(); ++i) {
      Bytes in = probed;
      in.insert(in.begin() + static_cast<std::ptrdiff_t>(i), delta, 0);
      EXPECT_FALSE(t.execute(in).contains(Chunks::kFixdPass)) << i;
    }
  }
}

TEST(Chunks, UnknownTypeIsFatal) {
  Chunks t;
  Bytes in = t.seed();
  in[8] = 'Z';
  const CoverageSet cov = t.execute(in);
  EXPECT_TRUE(cov.contains(Chunks::kTypeUnknown));
  EXPECT_FALSE(cov.contains(Chunks::kTypeVard));
}

TEST(Tlv, SeedParses) {
  Tlv t;
  const Bytes seed = t.seed();
  EXPECT_EQ(seed.size(), 30u);
  EXPECT_EQ(seed[0], Tlv::kSequence);
  const CoverageSet cov = t.execute(seed);
  EXPECT_TRUE(cov.contains(Tlv::kParseOk));
  EXPECT_FALSE(cov.contains(Tlv::kTrailingGarbage));
  for (Feature leaf = 0; leaf < 3; ++leaf) {
    EXPECT_TRUE(cov.contains(Tlv::kLeafBase + leaf));
  }
}

TEST(Tlv, ChildrenMustFillSequence) {
  Tlv t;
  Bytes in = t.seed();
  in.push_back(0);
  in[3] += 1;  // sequence claims one more byte than its children use
  EXPECT_FALSE(t.execute(in).contains(Tlv::kSeqOkBase));
}

TEST(ObjFile, SeedLoadsBothBlobs) {
  ObjFile t;
  const Bytes seed = t.seed();
  EXPECT_EQ(seed.size(), 80u);
  const CoverageSet cov = t.execute(seed);
  EXPECT_TRUE(cov.contains(ObjFile::kTableOk));
  EXPECT_TRUE(cov.contains(ObjFile::kEntryDisjointBase + 0));
  EXPECT_TRUE(cov.contains(ObjFile::kEntryDisjointBase + 1));
}

TEST(ObjFile, TableBeyondEndFails) {
  ObjFile t;
  Bytes in = t.seed();
  in[9] = 80;
  EXPECT_TRUE(t.execute(in).contains(ObjFile::kErrTable));
}

TEST(Echo, SameCoverageForEverything) {
  auto t = targets::make_toy_target("echo");
  EXPECT_EQ(t->execute({}), t->execute(t->seed()));
}

TEST(Registry, UnknownNameIsConfigError) {
  try {
    targets::make_toy_target("png");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigError);
  }
}

class Constant final : public Target {
 public:
  std::string_view name() const override { return "constant"; }
  CoverageSet execute(ByteSpan) const override { return {42}; }
};

TEST(Registry, UserTargets) {
  auto &reg = targets::TargetRegistry::instance();
  EXPECT_THROW(reg.add("echo", [] { return std::make_unique<Constant>(); }),
               Error);
  reg.add("constant", [] { return std::make_unique<Constant>(); });
  EXPECT_EQ(reg.make("constant")->execute({}), CoverageSet{42});
  EXPECT_EQ(reg.make("tlv")->name(), "tlv");
}

}  // namespace
}  // namespace relfuzz
