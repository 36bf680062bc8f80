/*
 * Copyright 2026 The seccmp Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SECCMP_SECCMP_HPP_
#define SECCMP_SECCMP_HPP_

#include "seccmp/auction.hpp"
#include "seccmp/bench.hpp"
#include "seccmp/cipher.hpp"
#include "seccmp/comparison.hpp"
#include "seccmp/counters.hpp"
#include "seccmp/errors.hpp"
#include "seccmp/keyfile.hpp"
#include "seccmp/keygen.hpp"
#include "seccmp/messages.hpp"
#include "seccmp/numeric.hpp"
#include "seccmp/protocols.hpp"
#include "seccmp/sharing.hpp"
#include "seccmp/transport.hpp"

#endif  // SECCMP_SECCMP_HPP_
