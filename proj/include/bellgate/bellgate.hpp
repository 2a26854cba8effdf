// Copyright 2026 The Bellgate Authors
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

#ifndef BELLGATE_BELLGATE_HPP
#define BELLGATE_BELLGATE_HPP

#include "bellgate/errors.hpp"
#include "bellgate/tensor_core.hpp"
#include "bellgate/random.hpp"
#include "bellgate/operator_io.hpp"
#include "bellgate/states.hpp"
#include "bellgate/source_ops.hpp"
#include "bellgate/inequalities.hpp"
#include "bellgate/povm.hpp"
#include "bellgate/sweep.hpp"
#include "bellgate/report.hpp"

#endif  // BELLGATE_BELLGATE_HPP
