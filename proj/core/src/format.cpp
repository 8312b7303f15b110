// Copyright 2026 The dcework Authors
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

#include "dcework/format.hpp"

#include <cstdio>

namespace dce {

std::string format_real(double value) {
    if (value == 0.0) {
        value = 0.0;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    std::string out(buf);
    if (out == "-0") {
        out = "0";
    }
    return out;
}

}  // namespace dce
