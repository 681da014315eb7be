#include "gradepred/grade.hpp"

#include <cctype>

namespace gradepred {

std::optional<Grade> Grade::from_letter(char letter) noexcept {
  switch (std::toupper(static_cast<unsigned char>(letter))) {
    case 'A': return Grade(5);
    case 'B': return Grade(4);
    case 'C': return Grade(3);
    case 'D': return Grade(2);
    case 'F': return Grade(1);
    default: return std::nullopt;
  }
}

char Grade::letter() const noexcept {
  static constexpr char kLetters[] = {'F', 'D', 'C', 'B', 'A'};
  return kLetters[index()];
}

}  // namespace gradepred
