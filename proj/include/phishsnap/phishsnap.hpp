/*
 * Copyright 2026 The PhishSnap Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

// Umbrella header for the native library. The WebAssembly core includes only
// the codec-free headers (image, dct, phash, bank, bk_tree).

#include "phishsnap/bank.hpp"
#include "phishsnap/bk_tree.hpp"
#include "phishsnap/calibration.hpp"
#include "phishsnap/codec.hpp"
#include "phishsnap/corpus.hpp"
#include "phishsnap/csv.hpp"
#include "phishsnap/dct.hpp"
#include "phishsnap/error.hpp"
#include "phishsnap/image.hpp"
#include "phishsnap/phash.hpp"
#include "phishsnap/random.hpp"
