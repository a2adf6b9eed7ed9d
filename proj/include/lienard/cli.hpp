#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lienard {

/// Command-line driver. Subcommands: spectrum, eigenfunction, classical,
/// symmetries, ladder, vonroos, report. Returns 0 on success, 1 when a
/// computation or a `report` check fails, 2 on usage or configuration errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lienard
