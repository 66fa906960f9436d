#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace pairdim {

// Characteristic of the algebraically closed fields; 0 or a prime.
class Characteristic {
 public:
  Characteristic() = default;
  explicit Characteristic(unsigned long value);

  unsigned long value() const { return value_; }
  bool is_zero() const { return value_ == 0; }

  friend bool operator==(Characteristic, Characteristic) = default;

 private:
  unsigned long value_ = 0;
};

// Shared engine settings. Transcendental constants are elements of K that
// are algebraically independent over k and over each other.
struct EngineContext {
  Characteristic characteristic;
  std::vector<std::string> transcendentals;
  std::size_t max_clauses = 10000;

  bool is_transcendental(const std::string& name) const;
};

}  // namespace pairdim
