// Copyright 2026 the maskenc authors
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

#include <catch2/catch_amalgamated.hpp>

#include "maskenc/mask.hpp"
#include "support/test_support.hpp"

using namespace maskenc;

TEST_CASE("iou basics", "[mask]") {
  BinaryMask a = BinaryMask::zeros(4, 4);
  BinaryMask b = BinaryMask::zeros(4, 4);

  SECTION("both empty counts as full agreement") {
    CHECK(iou(a, b) == 1.0);
  }
  SECTION("identical masks") {
    a.at(1, 2) = b.at(1, 2) = 1;
    a.at(3, 0) = b.at(3, 0) = 1;
    CHECK(iou(a, b) == 1.0);
  }
  SECTION("disjoint nonempty masks") {
    a.at(0, 0) = 1;
    b.at(3, 3) = 1;
    CHECK(iou(a, b) == 0.0);
  }
  SECTION("half-overlapping equal-area rectangles give 1/3") {
    // a covers cols 0..1, b covers cols 1..2, each 4 rows tall
    for (int r = 0; r < 4; ++r) {
      a.at(r, 0) = a.at(r, 1) = 1;
      b.at(r, 1) = b.at(r, 2) = 1;
    }
    CHECK(iou(a, b) == Catch::Approx(1.0 / 3.0));
  }
  SECTION("dimension mismatch is an error") {
    BinaryMask c = BinaryMask::zeros(4, 5);
    CHECK_THROWS_AS(iou(a, c), std::invalid_argument);
  }
}

TEST_CASE("iou symmetry and erosion monotonicity", "[mask][property]") {
  testsupport::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    BinaryMask a = testsupport::random_mask(rng, 9, 7, 0.4);
    BinaryMask b = testsupport::random_mask(rng, 9, 7, 0.4);
    CHECK(iou(a, b) == iou(b, a));
    CHECK(iou(a, a) == 1.0);

    // clearing one intersecting pixel cannot increase the IoU
    BinaryMask eroded = b;
    bool cleared = false;
    for (std::size_t i = 0; i < eroded.data.size() && !cleared; ++i)
      if (a.data[i] && eroded.data[i]) {
        eroded.data[i] = 0;
        cleared = true;
      }
    if (cleared) CHECK(iou(a, eroded) <= iou(a, b));
  }
}

TEST_CASE("tight_bbox", "[mask]") {
  SECTION("single pixel") {
    BinaryMask m = BinaryMask::zeros(6, 6);
    m.at(2, 3) = 1;
    CHECK(tight_bbox(m) == BBox{3, 2, 1, 1});
  }
  SECTION("full mask") {
    BinaryMask m = BinaryMask::zeros(5, 7);
    for (auto& v : m.data) v = 1;
    CHECK(tight_bbox(m) == BBox{0, 0, 7, 5});
  }
  SECTION("two opposite pixels span the box") {
    BinaryMask m = BinaryMask::zeros(6, 8);
    m.at(0, 0) = 1;
    m.at(5, 7) = 1;
    CHECK(tight_bbox(m) == BBox{0, 0, 8, 6});
  }
  SECTION("empty mask is an error") {
    BinaryMask m = BinaryMask::zeros(4, 4);
    CHECK_THROWS_AS(tight_bbox(m), std::invalid_argument);
  }
}

TEST_CASE("count_components", "[mask]") {
  GridMask g = GridMask::zeros(8);
  CHECK(count_components(g) == 0);
  g.at(0, 0) = 1;
  CHECK(count_components(g) == 1);
  g.at(7, 7) = 1;
  CHECK(count_components(g) == 2);
  g.at(1, 1) = 1;  // diagonal touch joins under 8-connectivity
  CHECK(count_components(g) == 2);
  CHECK(count_components(g, /*eight_connected=*/false) == 3);
}
