// Copyright 2026 The skymr Authors.
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

#include "skymr/dfs/direct_io.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <utility>

#include "skymr/common/error.hpp"

namespace skymr::dfs {
namespace {

struct FreeDeleter {
  void operator()(void* p) const noexcept { std::free(p); }
};

class Fd {
 public:
  explicit Fd(int fd) : fd_(fd) {}
  ~Fd() {
    if (fd_ >= 0) ::close(fd_);
  }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  int get() const { return fd_; }
  int release() { return std::exchange(fd_, -1); }

 private:
  int fd_;
};

bool write_fully(int fd, const std::uint8_t* p, std::size_t n) {
  while (n > 0) {
    const ssize_t w = ::write(fd, p, n);
    if (w < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    p += w;
    n -= static_cast<std::size_t>(w);
  }
  return true;
}

}  // namespace

std::string_view to_string(WriteMode mode) {
  return mode == WriteMode::kUnbuffered ? "unbuffered" : "buffered";
}

std::optional<WriteMode> write_mode_from_string(std::string_view name) {
  if (name == "buffered") return WriteMode::kBuffered;
  if (name == "unbuffered") return WriteMode::kUnbuffered;
  return std::nullopt;
}

bool write_unbuffered(const std::filesystem::path& path, ByteView data) {
#ifdef O_DIRECT
  Fd fd(::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_DIRECT, 0644));
  if (fd.get() < 0) {
    if (errno == EINVAL || errno == EOPNOTSUPP) return false;
    throw Error(ErrorCode::kIoError, "cannot create " + path.string() + ": " + std::strerror(errno));
  }
  thread_local std::unique_ptr<std::uint8_t, FreeDeleter> staging(
      static_cast<std::uint8_t*>(std::aligned_alloc(kDirectAlignment, kDirectStagingBytes)));
  if (!staging) throw Error(ErrorCode::kIoError, "aligned staging buffer allocation failed");

  std::size_t off = 0;
  while (off < data.size()) {
    const std::size_t take = std::min(kDirectStagingBytes, data.size() - off);
    const std::size_t padded = (take + kDirectAlignment - 1) / kDirectAlignment * kDirectAlignment;
    std::memcpy(staging.get(), data.data() + off, take);
    std::memset(staging.get() + take, 0, padded - take);
    if (!write_fully(fd.get(), staging.get(), padded)) {
      if (errno == EINVAL) {
        ::close(fd.release());
        std::filesystem::remove(path);
        return false;
      }
      throw Error(ErrorCode::kIoError, "direct write failed on " + path.string() + ": " + std::strerror(errno));
    }
    off += take;
  }
  if (::ftruncate(fd.get(), static_cast<off_t>(data.size())) != 0)
    throw Error(ErrorCode::kIoError, "ftruncate failed on " + path.string());
  return true;
#else
  (void)path;
  (void)data;
  return false;
#endif
}

void write_buffered(const std::filesystem::path& path, ByteView data) { write_all(path, data); }

bool write_with_mode(const std::filesystem::path& path, ByteView data, WriteMode mode) {
  if (mode == WriteMode::kUnbuffered) {
    if (write_unbuffered(path, data)) return false;
    write_buffered(path, data);
    return true;
  }
  write_buffered(path, data);
  return false;
}

}  // namespace skymr::dfs
