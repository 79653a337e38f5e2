// Copyright 2026 The spinwave Authors.
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

#ifndef SPINWAVE_SPINWAVE_HPP
#define SPINWAVE_SPINWAVE_HPP

#include "spinwave/criterion.hpp"
#include "spinwave/error.hpp"
#include "spinwave/exact_rank.hpp"
#include "spinwave/io.hpp"
#include "spinwave/lattice.hpp"
#include "spinwave/operators.hpp"
#include "spinwave/parallel.hpp"
#include "spinwave/sector_basis.hpp"
#include "spinwave/spectral.hpp"

#endif  // SPINWAVE_SPINWAVE_HPP
