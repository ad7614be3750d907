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


// C ABI of the portable core loaded by the browser extension. The extension
// decodes the captured screenshot to RGBA itself and passes the raster in.
//
// Functions returning int report 0 (or a byte count) on success and a
// negative value on failure; phishsnap_last_error() then describes it.

#ifndef PHISHSNAP_CORE_ABI_H_
#define PHISHSNAP_CORE_ABI_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct phishsnap_bank phishsnap_bank;

// Writes the 16 hex digits plus a terminating NUL to out_hex.
int phishsnap_hash_rgba(const uint8_t* rgba, uint32_t width, uint32_t height, char out_hex[17]);

// Parses a bank file. Returns NULL on error. An empty bank loads but cannot
// classify.
phishsnap_bank* phishsnap_bank_load(const char* json, size_t length);
void phishsnap_bank_free(phishsnap_bank* bank);
uint32_t phishsnap_bank_size(const phishsnap_bank* bank);
int phishsnap_bank_threshold(const phishsnap_bank* bank);

// Hashes the raster, classifies it and writes the verdict JSON (the same
// document `phishsnap scan --json` prints, without the newline). threshold < 0
// uses the bank's stored value. Returns the JSON length, or a negative value
// if the bank is empty, the input is invalid or `capacity` is too small.
int phishsnap_classify_rgba(const phishsnap_bank* bank, const uint8_t* rgba, uint32_t width, uint32_t height,
                            int threshold, char* out_json, size_t capacity);

const char* phishsnap_last_error(void);

// Scratch memory for callers without direct heap access (WebAssembly hosts).
void* phishsnap_alloc(size_t size);
void phishsnap_free(void* ptr);

#ifdef __cplusplus
}
#endif

#endif  // PHISHSNAP_CORE_ABI_H_
