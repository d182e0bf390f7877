// Copyright 2026 The Evacuation Planner Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "evac/binary_expansion.h"

#include <cstdint>

#include "gtest/gtest.h"

namespace evac {
namespace {

TEST(BinaryExpansionTest, BitWidth) {
  EXPECT_EQ(*BitWidth(1), 1);
  EXPECT_EQ(*BitWidth(2), 2);
  EXPECT_EQ(*BitWidth(25), 5);
  EXPECT_EQ(*BitWidth(30), 5);
  EXPECT_EQ(*BitWidth(31), 5);
  EXPECT_EQ(*BitWidth(32), 6);
  EXPECT_FALSE(BitWidth(0).ok());
}

TEST(BinaryExpansionTest, SmallestWidthThatFits) {
  for (int64_t q = 1; q <= 4096; ++q) {
    const int b = *BitWidth(q);
    ASSERT_GE((int64_t{1} << b) - 1, q);
    ASSERT_LT((int64_t{1} << (b - 1)) - 1, q);
  }
}

TEST(BinaryExpansionTest, Encode) {
  EXPECT_EQ(*EncodeBits(13, 5), (std::vector<int>{1, 0, 1, 1, 0}));
  EXPECT_EQ(*EncodeBits(0, 5), (std::vector<int>{0, 0, 0, 0, 0}));
  EXPECT_FALSE(EncodeBits(32, 5).ok());
  EXPECT_FALSE(EncodeBits(-1, 5).ok());
}

TEST(BinaryExpansionTest, DecodeInvertsEncode) {
  const std::vector<int> ones{1, 1, 1, 1, 1};
  EXPECT_EQ(DecodeBits(ones), 31);
  for (int width = 1; width <= 10; ++width) {
    for (int64_t k = 0; k < (int64_t{1} << width); ++k) {
      ASSERT_EQ(DecodeBits(*EncodeBits(k, width)), k);
    }
  }
}

}  // namespace
}  // namespace evac
