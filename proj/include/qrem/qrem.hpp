// Copyright 2026 The qrem Authors
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

#ifndef QREM_QREM_HPP
#define QREM_QREM_HPP

#include "qrem/counts.hpp"
#include "qrem/distances.hpp"
#include "qrem/error.hpp"
#include "qrem/fixtures.hpp"
#include "qrem/matrix.hpp"
#include "qrem/mitigation.hpp"
#include "qrem/noise_model.hpp"
#include "qrem/povm.hpp"
#include "qrem/random.hpp"
#include "qrem/sampling.hpp"
#include "qrem/simulator.hpp"
#include "qrem/stochastic.hpp"
#include "qrem/tomography.hpp"

#endif  // QREM_QREM_HPP
