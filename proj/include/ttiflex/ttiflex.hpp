// ttiflex - control-overhead and airlink-utilization analytics for mmWave TDD MAC frame design
// Copyright 2026 the ttiflex authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "ttiflex/frame.hpp"
#include "ttiflex/channel.hpp"
#include "ttiflex/traffic.hpp"
#include "ttiflex/utilization.hpp"
#include "ttiflex/overhead.hpp"
#include "ttiflex/scenario.hpp"
#include "ttiflex/simulator.hpp"
#include "ttiflex/report.hpp"
