#pragma once

namespace wseq {
constexpr const char* kVersion = "0.1.0";
}
