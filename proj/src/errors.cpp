#include "pleatlab/errors.hpp"

#include <utility>

namespace pleatlab {

ParseError::ParseError(Kind kind, std::size_t offset, std::vector<std::string> expected,
                       const std::string& what)
    : Error(what + " at offset " + std::to_string(offset)),
      kind_(kind),
      offset_(offset),
      expected_(std::move(expected)) {}

UnboundParameter::UnboundParameter(const std::string& name)
    : Error("parameter '" + name + "' has no binding"), name_(name) {}

}  // namespace pleatlab
