// Copyright 2026 The CCC Toolkit Authors.
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

#include "ccc/io.h"

#include <atomic>
#include <cstdlib>
#include <system_error>

#include <unistd.h>

#include "ccc/errors.h"

namespace ccc {
namespace {

std::filesystem::path TempPathFor(const std::filesystem::path& target) {
  static std::atomic<unsigned> counter{0};
  std::string name = "." + target.filename().string() + ".tmp." +
                     std::to_string(::getpid()) + "." +
                     std::to_string(counter.fetch_add(1));
  if (const char* dir = std::getenv("CCC_TMPDIR"); dir && *dir) {
    return std::filesystem::path(dir) / name;
  }
  return target.parent_path() / name;
}

}  // namespace

std::ifstream OpenInput(const std::string& path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) throw IoError("cannot open input file: " + path);
  return in;
}

void StripCarriageReturn(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

AtomicOutputFile::AtomicOutputFile(std::filesystem::path target,
                                   std::ios::openmode mode)
    : target_(std::move(target)), temp_(TempPathFor(target_)) {
  out_.open(temp_, mode | std::ios::out | std::ios::trunc);
  if (!out_) throw IoError("cannot open output file: " + temp_.string());
}

AtomicOutputFile::~AtomicOutputFile() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    std::filesystem::remove(temp_, ec);
  }
}

void AtomicOutputFile::Commit() {
  out_.flush();
  if (!out_) throw IoError("write failed: " + temp_.string());
  out_.close();
  std::error_code ec;
  std::filesystem::rename(temp_, target_, ec);
  if (ec) {
    // Cross-device temp dir: fall back to copy + remove.
    std::filesystem::copy_file(
        temp_, target_, std::filesystem::copy_options::overwrite_existing,
        ec);
    if (ec) {
      throw IoError("cannot move output into place: " + target_.string() +
                    ": " + ec.message());
    }
    std::filesystem::remove(temp_, ec);
  }
  committed_ = true;
}

}  // namespace ccc
