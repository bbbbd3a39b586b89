/*
   Copyright 2026 The stochconv Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <gtest/gtest.h>

#include <cmath>

#include "stochconv/rng.hpp"

using namespace stochconv;

// Known-answer vectors for Philox4x32-10 from the Random123 distribution.
TEST(Philox, KnownAnswerZero) {
    const auto r = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(r[0], 0x6627e8d5u);
    EXPECT_EQ(r[1], 0xe169c58du);
    EXPECT_EQ(r[2], 0xbc57ac4cu);
    EXPECT_EQ(r[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerOnes) {
    const auto r = Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    EXPECT_EQ(r[0], 0x408f276du);
    EXPECT_EQ(r[1], 0x41c83b0eu);
    EXPECT_EQ(r[2], 0xa20bc7c6u);
    EXPECT_EQ(r[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi) {
    const auto r = Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
    EXPECT_EQ(r[0], 0xd16cfe09u);
    EXPECT_EQ(r[1], 0x94fdccebu);
    EXPECT_EQ(r[2], 0x5001e420u);
    EXPECT_EQ(r[3], 0x24126ea1u);
}

TEST(NormalStream, AddressingIsOrderFree) {
    const NormalStream a(42, StreamTag::Wiener, 7), b(42, StreamTag::Wiener, 7);
    const auto late = b.pair(5, 3);
    b.pair(0, 0);
    EXPECT_EQ(a.pair(5, 3), late);
    EXPECT_NE(a.pair(5, 3), NormalStream(42, StreamTag::ExactOU, 7).pair(5, 3));
    EXPECT_NE(a.pair(5, 3), NormalStream(43, StreamTag::Wiener, 7).pair(5, 3));
}

TEST(NormalStream, MomentsOfManyDraws) {
    const NormalStream ns(1, StreamTag::Probe, 0);
    const int n = 200000;
    double s1 = 0, s2 = 0, s4 = 0;
    for (int i = 0; i < n / 2; ++i) {
        auto [x, y] = ns.pair(std::uint32_t(i), 0);
        for (double z : {x, y}) {
            s1 += z;
            s2 += z * z;
            s4 += z * z * z * z;
        }
    }
    EXPECT_NEAR(s1 / n, 0.0, 4.0 / std::sqrt(double(n)));
    EXPECT_NEAR(s2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
    EXPECT_NEAR(s4 / n, 3.0, 4.0 * std::sqrt(96.0 / n));
}

TEST(DeriveSeed, DistinctLabels) {
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_EQ(derive_seed(9, 4), derive_seed(9, 4));
}
