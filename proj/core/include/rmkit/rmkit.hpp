// Copyright 2026 The rmkit Authors
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

#pragma once

#include "rmkit/core.hpp"
#include "rmkit/error.hpp"
#include "rmkit/estimators.hpp"
#include "rmkit/io.hpp"
#include "rmkit/linalg.hpp"
#include "rmkit/parallel.hpp"
#include "rmkit/random.hpp"
#include "rmkit/sampling.hpp"
#include "rmkit/shadows.hpp"
#include "rmkit/shallow.hpp"
#include "rmkit/simulate.hpp"
#include "rmkit/state.hpp"
#include "rmkit/stats.hpp"
