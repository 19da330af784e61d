// Copyright 2026 The nmrqc Authors
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

#include "nmrqc/circuit.hpp"
#include "nmrqc/compiler.hpp"
#include "nmrqc/constants.hpp"
#include "nmrqc/demos.hpp"
#include "nmrqc/density_matrix.hpp"
#include "nmrqc/engine.hpp"
#include "nmrqc/errors.hpp"
#include "nmrqc/init.hpp"
#include "nmrqc/molecule_io.hpp"
#include "nmrqc/pipeline.hpp"
#include "nmrqc/product_operators.hpp"
#include "nmrqc/pulse_sequence.hpp"
#include "nmrqc/readout.hpp"
#include "nmrqc/refocusing.hpp"
#include "nmrqc/routing.hpp"
#include "nmrqc/scaling.hpp"
#include "nmrqc/sequence_sim.hpp"
#include "nmrqc/spin_model.hpp"
