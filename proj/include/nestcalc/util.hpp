#pragma once
// Small shared utilities: visitor overload set and a lightweight Result.

#include <cassert>
#include <utility>
#include <variant>

namespace nestcalc {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Minimal ok/err sum.  T and E must be distinct types.
template <typename T, typename E>
class Result {
 public:
  Result(T value) : v_(std::in_place_index<0>, std::move(value)) {}
  Result(E error) : v_(std::in_place_index<1>, std::move(error)) {}

  bool is_ok() const { return v_.index() == 0; }
  explicit operator bool() const { return is_ok(); }

  const T& value() const {
    assert(is_ok());
    return std::get<0>(v_);
  }
  T& value() {
    assert(is_ok());
    return std::get<0>(v_);
  }
  const E& error() const {
    assert(!is_ok());
    return std::get<1>(v_);
  }

 private:
  std::variant<T, E> v_;
};

}  // namespace nestcalc
