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

#pragma once

#include "maskenc/coco_io.hpp"
#include "maskenc/codebook.hpp"
#include "maskenc/container.hpp"
#include "maskenc/errors.hpp"
#include "maskenc/eval.hpp"
#include "maskenc/fit.hpp"
#include "maskenc/losses.hpp"
#include "maskenc/mask.hpp"
#include "maskenc/parallel.hpp"
#include "maskenc/polar.hpp"
#include "maskenc/polygon.hpp"
#include "maskenc/report.hpp"
#include "maskenc/resample.hpp"
#include "maskenc/rle.hpp"
#include "maskenc/synth.hpp"
