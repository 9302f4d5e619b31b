#pragma once

namespace weldkit::cli {

/// Entry point of the `weldkit` executable. Returns 0 on success, 1 on
/// input/format errors, 2 on parameter and usage errors.
int run(int argc, const char* const* argv);

}  // namespace weldkit::cli
