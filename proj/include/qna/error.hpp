#pragma once

#include <stdexcept>
#include <string>

namespace qna {

// All validation and I/O failures surface as qna::Error with a message
// that names the offending file/line/id. The CLI maps these to exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qna
