#pragma once

#include <iosfwd>

namespace egress {

// Full command-line front end, callable in-process for tests. Returns the
// process exit status: 0 success, 2 user error, 3 I/O error. Records go to
// `out` one per line; diagnostics go to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace egress
