// Copyright 2026 The prodinv Authors
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

// Umbrella header for the prodinv library.

#ifndef PRODINV_PRODINV_HPP_
#define PRODINV_PRODINV_HPP_

#include "prodinv/adjoint.hpp"
#include "prodinv/analytic.hpp"
#include "prodinv/brute_force.hpp"
#include "prodinv/control.hpp"
#include "prodinv/dynamics.hpp"
#include "prodinv/error.hpp"
#include "prodinv/model.hpp"
#include "prodinv/planner.hpp"
#include "prodinv/verifier.hpp"

#endif  // PRODINV_PRODINV_HPP_
