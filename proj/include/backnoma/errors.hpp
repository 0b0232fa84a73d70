#ifndef BACKNOMA_ERRORS_HPP_
#define BACKNOMA_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace backnoma {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// specfun
struct NonConvergent : Error {
  using Error::Error;
};
struct PoleAtC : Error {
  using Error::Error;
};
struct InvalidShape : Error {
  using Error::Error;
};

// distributions
struct DegenerateMatch : Error {
  using Error::Error;
};
struct EmptySample : Error {
  using Error::Error;
};

// simulator / experiments
struct InsufficientTrials : Error {
  using Error::Error;
};
struct EmptyGrid : Error {
  using Error::Error;
};

// config
struct ParseError : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};

}  // namespace backnoma

#endif  // BACKNOMA_ERRORS_HPP_
