// Copyright 2026 The AugBoost Authors.
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

// Umbrella header.

#ifndef AUGBOOST_AUGBOOST_HPP
#define AUGBOOST_AUGBOOST_HPP

#include "augboost/ann.hpp"
#include "augboost/augment.hpp"
#include "augboost/boost.hpp"
#include "augboost/config.hpp"
#include "augboost/dataset.hpp"
#include "augboost/eval.hpp"
#include "augboost/matrix.hpp"
#include "augboost/random.hpp"
#include "augboost/report.hpp"
#include "augboost/serialize.hpp"
#include "augboost/tree.hpp"

#endif  // AUGBOOST_AUGBOOST_HPP
