#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace msploc {

/// The formal variables that appear in localization contributions.
///
/// Kinds are ordered EquivParam < Hyperplane < Psi < Lambda < CorrelatorToken;
/// within a kind variables compare by (first, second, name). This total order
/// is what fixes the graded-lex term order of Polynomial.
class Variable {
public:
  enum class Kind : std::uint8_t { EquivParam, Hyperplane, Psi, Lambda, CorrelatorToken };

  /// t_alpha, alpha >= 1.
  static Variable equiv(int alpha);
  /// h_e: hyperplane class pulled back along the evaluation attached to edge e.
  static Variable hyperplane(int edge);
  /// psi class of the flag (edge, vertex).
  static Variable psi(int edge, int vertex);
  /// lambda_i of the Hodge bundle at a vertex, i >= 1.
  static Variable lambda(int vertex, int index);
  /// Opaque correlator token; the name is restricted to [A-Za-z0-9_].
  static Variable token(std::string name);

  Kind kind() const noexcept { return kind_; }
  int first() const noexcept { return first_; }
  int second() const noexcept { return second_; }
  const std::string& name() const noexcept { return name_; }

  /// Rendered as t[1], h[0], psi[0,1], lam[2,1] or tok[name].
  std::string to_string() const;

  friend bool operator==(const Variable&, const Variable&) = default;
  friend std::strong_ordering operator<=>(const Variable& a, const Variable& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    if (auto c = a.first_ <=> b.first_; c != 0) return c;
    if (auto c = a.second_ <=> b.second_; c != 0) return c;
    return a.name_.compare(b.name_) <=> 0;
  }

private:
  Variable(Kind kind, int first, int second, std::string name)
      : kind_(kind), first_(first), second_(second), name_(std::move(name)) {}

  Kind kind_;
  int first_;
  int second_;
  std::string name_;
};

}  // namespace msploc
