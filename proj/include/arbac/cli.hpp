#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace arbac::cli {

/// Environment variable holding the default `check --max-states` value.
inline constexpr const char* kMaxStatesEnv = "ARBAC_MAX_STATES";
inline constexpr std::uint64_t kDefaultMaxStates = 20'000'000;

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

/// Parses the value of ARBAC_MAX_STATES; nullopt if unset or malformed.
std::optional<std::uint64_t> max_states_from_env(const char* value);

/// Runs one command line (`args[0]` is the program name). Policy text and
/// JSON go to `out`, everything else to `err`.
///
/// Exit codes: 0 success / all queries unreachable, 1 usage, I/O, parse or
/// validation error, 2 some query reachable, 3 some query unknown and none
/// reachable.
int run(const std::vector<std::string>& args, const Streams& io,
        std::uint64_t default_max_states = kDefaultMaxStates);

}  // namespace arbac::cli
