#pragma once

#include <exception>
#include <string>

#include "cantisq/status.hpp"

namespace cantisq::io {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 1,       // bad arguments, unreadable or unwritable files
  exit_parse = 2,       // malformed config text
  exit_validation = 3,  // config or inputs violate an invariant
  exit_numerical = 4,   // solver failure
  exit_cutoff = 5,      // Fock oracle ran but the truncation is not trustworthy
};

/// Maps the exception currently being handled to its exit code class.
inline int exit_code_for(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const ParseError&) {
    return exit_parse;
  } catch (const ValidationError&) {
    return exit_validation;
  } catch (const CutoffLimitedError&) {
    return exit_cutoff;
  } catch (const NumericalError&) {
    return exit_numerical;
  } catch (...) {
    return exit_usage;
  }
}

}  // namespace cantisq::io
