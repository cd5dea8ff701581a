// Copyright 2026 The stmr Authors
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

#include "stmr/atomic/density.hpp"
#include "stmr/atomic/drives.hpp"
#include "stmr/atomic/ladder.hpp"
#include "stmr/atomic/master_equation.hpp"
#include "stmr/atomic/rk4.hpp"
#include "stmr/constants.hpp"
#include "stmr/dsp/matched_filter.hpp"
#include "stmr/dsp/metrics.hpp"
#include "stmr/errors.hpp"
#include "stmr/harness/config.hpp"
#include "stmr/harness/csv.hpp"
#include "stmr/harness/experiments.hpp"
#include "stmr/optical/doppler.hpp"
#include "stmr/optical/ensemble.hpp"
#include "stmr/optical/response.hpp"
#include "stmr/optical/spectrum.hpp"
#include "stmr/optical/vapor.hpp"
#include "stmr/receiver/detector.hpp"
#include "stmr/receiver/ook.hpp"
#include "stmr/receiver/pulse_response.hpp"
#include "stmr/receiver/schedule.hpp"
#include "stmr/util/parallel.hpp"
#include "stmr/util/rng.hpp"
