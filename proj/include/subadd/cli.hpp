#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace subadd {

/// Exit codes: 0 success, 1 a verification found violations, 2 bad input.
/// `args` includes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a, used for output checksums in run manifests.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace subadd
