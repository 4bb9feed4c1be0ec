#pragma once

namespace wigosc {

/// Build identifier embedded in every data file the CLI writes.
inline constexpr const char* version_string = "wigosc 1.0.0";

}  // namespace wigosc
