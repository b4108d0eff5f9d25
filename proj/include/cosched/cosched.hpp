// Copyright 2026 The cosched Authors
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

#include "cosched/types.hpp"
#include "cosched/network_model.hpp"
#include "cosched/channel_model.hpp"
#include "cosched/csi.hpp"
#include "cosched/scheduler_core.hpp"
#include "cosched/cs_ilp.hpp"
#include "cosched/cs_heuristics.hpp"
#include "cosched/sim_harness.hpp"
