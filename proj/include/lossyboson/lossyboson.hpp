// Copyright 2026 The lossyboson Authors
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

// Umbrella header.
#pragma once

#include "lossyboson/bench.hpp"
#include "lossyboson/complexmat.hpp"
#include "lossyboson/errors.hpp"
#include "lossyboson/fock.hpp"
#include "lossyboson/io.hpp"
#include "lossyboson/lossy.hpp"
#include "lossyboson/network.hpp"
#include "lossyboson/oracle.hpp"
#include "lossyboson/random.hpp"
#include "lossyboson/sampler.hpp"
#include "lossyboson/validate.hpp"
