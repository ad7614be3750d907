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


#include "core_abi.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phishsnap/bank.hpp"
#include "phishsnap/bk_tree.hpp"
#include "phishsnap/image.hpp"
#include "phishsnap/phash.hpp"

struct phishsnap_bank {
  phishsnap::HashBank bank;
};

namespace {

thread_local std::string g_last_error;

int fail(std::string message) {
  g_last_error = std::move(message);
  return -1;
}

phishsnap::RawImage raster(const uint8_t* rgba, uint32_t width, uint32_t height) {
  if (rgba == nullptr) throw phishsnap::InvalidInputError("null raster");
  std::vector<phishsnap::Rgba> pixels(static_cast<std::size_t>(width) * height);
  std::memcpy(pixels.data(), rgba, pixels.size() * 4);
  return phishsnap::RawImage(width, height, std::move(pixels));
}

}  // namespace

extern "C" {

int phishsnap_hash_rgba(const uint8_t* rgba, uint32_t width, uint32_t height, char out_hex[17]) {
  try {
    const std::string hex = phishsnap::compute_phash(raster(rgba, width, height)).to_hex();
    std::memcpy(out_hex, hex.c_str(), 17);
    return 0;
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

phishsnap_bank* phishsnap_bank_load(const char* json, size_t length) {
  try {
    return new phishsnap_bank{phishsnap::load_bank(std::string_view(json, length))};
  } catch (const std::exception& e) {
    fail(e.what());
    return nullptr;
  }
}

void phishsnap_bank_free(phishsnap_bank* bank) { delete bank; }

uint32_t phishsnap_bank_size(const phishsnap_bank* bank) {
  return bank == nullptr ? 0 : static_cast<uint32_t>(bank->bank.size());
}

int phishsnap_bank_threshold(const phishsnap_bank* bank) { return bank == nullptr ? -1 : bank->bank.threshold(); }

int phishsnap_classify_rgba(const phishsnap_bank* bank, const uint8_t* rgba, uint32_t width, uint32_t height,
                            int threshold, char* out_json, size_t capacity) {
  if (bank == nullptr) return fail("null bank");
  try {
    const phishsnap::PHash64 hash = phishsnap::compute_phash(raster(rgba, width, height));
    const auto verdict = phishsnap::classify(
        bank->bank, hash, threshold < 0 ? std::nullopt : std::optional<int>(threshold));
    const std::string doc = phishsnap::verdict_to_json(verdict, hash).dump();
    if (doc.size() + 1 > capacity) return fail("output buffer too small: need " + std::to_string(doc.size() + 1));
    std::memcpy(out_json, doc.c_str(), doc.size() + 1);
    return static_cast<int>(doc.size());
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

const char* phishsnap_last_error(void) { return g_last_error.c_str(); }

void* phishsnap_alloc(size_t size) { return std::malloc(size); }

void phishsnap_free(void* ptr) { std::free(ptr); }

}  // extern "C"
