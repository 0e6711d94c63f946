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

#ifndef CCC_IO_H_
#define CCC_IO_H_

#include <filesystem>
#include <fstream>
#include <string>

namespace ccc {

// Opens `path` for reading or throws IoError.
std::ifstream OpenInput(const std::string& path,
                        std::ios::openmode mode = std::ios::in);

// Strips one trailing '\r' so CRLF files parse like LF files.
void StripCarriageReturn(std::string& line);

// Writes to a temporary sibling and renames onto the target on Commit().
// An uncommitted file is removed on destruction, so a crashed stage never
// leaves a truncated output under its final name. When CCC_TMPDIR is set
// the temporary lives there instead.
class AtomicOutputFile {
 public:
  explicit AtomicOutputFile(std::filesystem::path target,
                            std::ios::openmode mode = std::ios::out);
  ~AtomicOutputFile();

  AtomicOutputFile(const AtomicOutputFile&) = delete;
  AtomicOutputFile& operator=(const AtomicOutputFile&) = delete;

  std::ostream& stream() { return out_; }
  const std::filesystem::path& target() const { return target_; }
  void Commit();

 private:
  std::filesystem::path target_;
  std::filesystem::path temp_;
  std::ofstream out_;
  bool committed_ = false;
};

}  // namespace ccc

#endif  // CCC_IO_H_
