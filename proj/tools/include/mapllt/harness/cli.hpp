#pragma once

namespace mapllt::harness {

// Exit codes: 0 success, 1 validation/usage error, 2 acceptance-check failure
// under --strict.
int cli_main(int argc, const char* const* argv);

}  // namespace mapllt::harness
