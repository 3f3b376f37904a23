#pragma once

#include <iosfwd>

namespace qgreedy {

/// Entry point of the `qgreedy` tool. Returns 0 on success, 1 on usage
/// errors, 2 on runtime errors.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qgreedy
