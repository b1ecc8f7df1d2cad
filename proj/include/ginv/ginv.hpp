// Copyright 2026 The ginv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GINV_GINV_HPP
#define GINV_GINV_HPP

#include "ginv/error.hpp"
#include "ginv/exact.hpp"
#include "ginv/gen_inverse.hpp"
#include "ginv/idempotent.hpp"
#include "ginv/linalg.hpp"
#include "ginv/perturbation.hpp"
#include "ginv/random.hpp"
#include "ginv/subspace.hpp"

#endif  // GINV_GINV_HPP
