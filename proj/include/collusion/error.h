#ifndef COLLUSION_ERROR_H_
#define COLLUSION_ERROR_H_

#include <stdexcept>
#include <string>

namespace collusion {

// Raised for violated preconditions and malformed inputs throughout the
// library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace collusion

#endif  // COLLUSION_ERROR_H_
