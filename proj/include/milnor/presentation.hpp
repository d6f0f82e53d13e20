#pragma once

#include <utility>
#include <vector>

#include "milnor/kchain.hpp"

namespace milnor {

struct PresentationTerm {
  Int coeff;
  Symbol symbol;
};

/// An ordered way of writing an element as sum c_r s_r of symbols of one
/// degree. Divided powers are defined on presentations, not on classes.
class Presentation {
 public:
  Presentation(TowerPtr tower, std::size_t degree) : tower_(std::move(tower)), degree_(degree) {}

  static Presentation from_chain(const KChain& x) {
    Presentation p(x.tower(), x.degree());
    for (const auto& [s, c] : x.terms()) p.push(c, s);
    return p;
  }

  const TowerPtr& tower() const noexcept { return tower_; }
  std::size_t degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  const std::vector<PresentationTerm>& terms() const noexcept { return terms_; }
  std::vector<PresentationTerm>& terms() noexcept { return terms_; }
  const PresentationTerm& operator[](std::size_t k) const { return terms_.at(k); }

  void push(const Int& coeff, const Symbol& s) { insert(terms_.size(), coeff, s); }

  void insert(std::size_t pos, const Int& coeff, const Symbol& s) {
    if (s.degree() != degree_) throw DomainError("presentation term of the wrong degree");
    if (s.degree() && s[0].tower() != tower_) throw DomainError("presentation term over a different field");
    terms_.insert(terms_.begin() + static_cast<long>(pos), PresentationTerm{coeff, s});
  }

  /// The element presented, forgetting the order.
  KChain chain() const {
    KChain x(tower_, degree_);
    for (const auto& t : terms_) x.add_term(t.symbol, t.coeff);
    return x;
  }

  /// x || y: the terms of x followed by those of y.
  friend Presentation concat(const Presentation& x, const Presentation& y) {
    if (x.tower_ != y.tower_ || x.degree_ != y.degree_) throw DomainError("concatenating incompatible presentations");
    Presentation r = x;
    r.terms_.insert(r.terms_.end(), y.terms_.begin(), y.terms_.end());
    return r;
  }

 private:
  TowerPtr tower_;
  std::size_t degree_;
  std::vector<PresentationTerm> terms_;
};

}  // namespace milnor
