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

#include "rmkit/parallel.hpp"

#include <atomic>

namespace rmkit {
namespace {

std::atomic<int> g_thread_count{1};

}  // namespace

void set_thread_count(int n) { g_thread_count.store(std::max(1, n)); }

int thread_count() { return g_thread_count.load(); }

}  // namespace rmkit
