#pragma once

namespace feas {

/// Command-line surface: gen-ic, simulate, analyze, flux, ineq.
/// Exit codes: 0 success, 1 usage, 2 validation, 3 runtime (blow-up, with
/// partial outputs retained).
int cli_dispatch(int argc, const char* const* argv);

} // namespace feas
