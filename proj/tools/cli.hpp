#pragma once

#include <ostream>

namespace ogt::cli {

/// Runs one command line. Exit codes: 0 success/accept, 1 reject, 2 usage or
/// input error, 3 capacity error, 4 stage failure. Errors go to `err` as a
/// JSON object.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ogt::cli
