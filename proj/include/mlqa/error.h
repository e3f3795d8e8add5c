#ifndef MLQA_ERROR_H_
#define MLQA_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlqa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A malformed record in a line-oriented input file.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& message)
      : Error(source + ":" + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace mlqa

#endif  // MLQA_ERROR_H_
