//
// Copyright 2026 The advtext Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef ADVTEXT_ADVTEXT_HPP_
#define ADVTEXT_ADVTEXT_HPP_

#include "advtext/attacks.hpp"
#include "advtext/datagen.hpp"
#include "advtext/defense_abstain.hpp"
#include "advtext/defense_explicit.hpp"
#include "advtext/errors.hpp"
#include "advtext/evaluation.hpp"
#include "advtext/io.hpp"
#include "advtext/model.hpp"
#include "advtext/pipeline.hpp"
#include "advtext/rng.hpp"
#include "advtext/text_core.hpp"

#endif  // ADVTEXT_ADVTEXT_HPP_
