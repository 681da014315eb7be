#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace gradepred {

// Letter grade on the integer scale 5=A 4=B 3=C 2=D 1=F.
class Grade {
 public:
  static constexpr int kMin = 1;
  static constexpr int kMax = 5;
  static constexpr std::size_t kCount = 5;

  constexpr Grade() = default;
  constexpr explicit Grade(int value) : value_(value) {
    if (value < kMin || value > kMax) {
      throw std::out_of_range("grade value must be in 1..5, got " + std::to_string(value));
    }
  }

  static constexpr Grade from_index(std::size_t index) { return Grade(static_cast<int>(index) + 1); }

  // Case-insensitive; nullopt for anything outside A,B,C,D,F.
  static std::optional<Grade> from_letter(char letter) noexcept;

  constexpr int value() const noexcept { return value_; }
  constexpr std::size_t index() const noexcept { return static_cast<std::size_t>(value_ - 1); }
  char letter() const noexcept;

  constexpr auto operator<=>(const Grade&) const = default;

 private:
  int value_ = kMin;
};

// Per-class scores indexed by Grade::index() (F first, A last).
using ClassScores = std::array<double, Grade::kCount>;

}  // namespace gradepred
