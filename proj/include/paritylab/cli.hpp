#pragma once

#include <ostream>

namespace paritylab {

/// Entry point of the paritylab tool. Exit codes: 0 success, 1 domain error
/// or failed check, 2 malformed input or usage.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace paritylab
