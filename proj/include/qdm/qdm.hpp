// Copyright 2026 The qdm Authors
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

// Umbrella header for the library.

#ifndef QDM_QDM_HPP
#define QDM_QDM_HPP

#include "qdm/conditioning.hpp"
#include "qdm/cone_oracle.hpp"
#include "qdm/config.hpp"
#include "qdm/density.hpp"
#include "qdm/desirability.hpp"
#include "qdm/hermitian.hpp"
#include "qdm/previsions.hpp"
#include "qdm/projection.hpp"
#include "qdm/random.hpp"
#include "qdm/sdp.hpp"

#endif // QDM_QDM_HPP
