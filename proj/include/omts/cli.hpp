#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace omts
{

// Runs one command line (without the program name). Writes a single JSON report to `out`
// and diagnostics to `err`. Returns 0 on success or when the checked property holds, 2 when
// it fails, 1 on usage or input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace omts
