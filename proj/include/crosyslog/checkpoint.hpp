// Copyright 2026 The CroSysLog Authors.
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

#ifndef CROSYSLOG_CHECKPOINT_HPP_
#define CROSYSLOG_CHECKPOINT_HPP_

#include <fstream>
#include <string>

#include "crosyslog/binary_io.hpp"
#include "crosyslog/model.hpp"

namespace crosyslog {

// CSLM checkpoint, little-endian:
//   "CSLM" | u32 version=1 | u32 embedding_dim | u32 hidden_dim |
//   w_input (4h x d) | w_recurrent (4h x h) | bias (4h) | w_head (2 x h) | b_head (2)
// Matrices are stored row-major as f32.

inline constexpr std::uint32_t kCslmVersion = 1;

inline void write_checkpoint(std::ostream& out, const LstmParams& p) {
  binio::put_magic(out, "CSLM");
  binio::put_uint<std::uint32_t>(out, kCslmVersion);
  binio::put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(p.embedding_dim()));
  binio::put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(p.hidden_dim()));
  p.for_each_block([&](const char*, const auto& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) binio::put_f32(out, static_cast<float>(m(i, j)));
  });
}

inline LstmParams read_checkpoint(std::istream& in) {
  binio::expect_magic(in, "CSLM");
  const auto version = binio::get_uint<std::uint32_t>(in);
  if (version != kCslmVersion) throw FormatError("unsupported CSLM version " + std::to_string(version));
  const auto d = binio::get_uint<std::uint32_t>(in);
  const auto h = binio::get_uint<std::uint32_t>(in);
  if (d == 0 || h == 0) throw FormatError("CSLM dims must be positive");
  LstmParams p = LstmParams::zeros(d, h);
  p.for_each_block([&](const char*, auto& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = binio::get_f32(in);
  });
  if (!p.all_finite()) throw FormatError("checkpoint contains non-finite values");
  return p;
}

inline void save_checkpoint(const std::string& path, const LstmParams& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_checkpoint(out, p);
  if (!out) throw IoError("write failed: " + path);
}

inline LstmParams load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_checkpoint(in);
}

}  // namespace crosyslog

#endif  // CROSYSLOG_CHECKPOINT_HPP_
