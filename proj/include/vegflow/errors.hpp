#ifndef VEGFLOW_ERRORS_HPP_
#define VEGFLOW_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace vegflow {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rejected input: bad grids, non-finite values, invalid parameters.
struct InvalidInput : Error {
  using Error::Error;
};

// Normal-offset coordinates left their validity range (offset beyond the
// focal distance, volume factor <= 0).
struct DegenerateOffset : Error {
  using Error::Error;
};

// Non-finite state detected after a time step.
struct SolverBlowup : Error {
  SolverBlowup(int i_, int j_, double t_, const std::string& what_)
      : Error(what_), i(i_), j(j_), t(t_) {}
  int i;
  int j;
  double t;
};

// Text input that could not be parsed; line is 1-based, 0 if unknown.
struct ParseError : Error {
  ParseError(const std::string& what_, long line_ = 0) : Error(what_), line(line_) {}
  long line;
};

// A check that requires a steady flow received a non-steady one.
struct NotSteady : Error {
  NotSteady(const std::string& what_, double residual_) : Error(what_), residual(residual_) {}
  double residual;
};

// Eigenvalue pencil too close to degenerate to solve reliably.
struct IllConditionedPencil : Error {
  using Error::Error;
};

}  // namespace vegflow

#endif  // VEGFLOW_ERRORS_HPP_
