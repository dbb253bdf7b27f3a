/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The aifrecon Authors
 * SPDX-License-Identifier: Apache-2.0
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

#ifndef AIFRECON_ERROR_HPP
#define AIFRECON_ERROR_HPP

#include <stdexcept>
#include <string>

namespace aifrecon {

enum class ErrorCode {
  InvalidArgument,
  DimsTooSmall,
  MetaMismatch,
  EmptyRegion,
  OutOfRange,
  Parse,
  Io,
};

/// Exception type thrown by every module of the core library. The C API maps
/// `code()` onto its status enum; the message is kept for the caller.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace aifrecon

#endif  // AIFRECON_ERROR_HPP
