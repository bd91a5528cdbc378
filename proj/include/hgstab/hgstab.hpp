// Copyright 2026 The hgstab Authors
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

#pragma once

#include "hgstab/errors.hpp"
#include "hgstab/experiments.hpp"
#include "hgstab/gfp.hpp"
#include "hgstab/hypergraph.hpp"
#include "hgstab/io.hpp"
#include "hgstab/network.hpp"
#include "hgstab/oracle.hpp"
#include "hgstab/rng.hpp"
#include "hgstab/set_function.hpp"
#include "hgstab/stabilizer.hpp"
