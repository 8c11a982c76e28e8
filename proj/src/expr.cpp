#include "rsm/expr.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace rsm {

namespace {

using PowerMap = std::map<std::string, unsigned>;

unsigned power_degree(const PowerMap& powers) {
  unsigned d = 0;
  for (const auto& [name, e] : powers) d += e;
  return d;
}

/// Graded-lex: total degree first, ties by the power map itself.
bool powers_before(const PowerMap& lhs, const PowerMap& rhs) {
  unsigned dl = power_degree(lhs);
  unsigned dr = power_degree(rhs);
  if (dl != dr) return dl < dr;
  return lhs < rhs;
}

std::vector<Monomial> canonicalize(std::map<PowerMap, Rational> acc) {
  std::vector<Monomial> terms;
  for (auto& [powers, coeff] : acc) {
    if (coeff == 0) continue;
    terms.push_back(Monomial{std::move(coeff), powers});
  }
  std::sort(terms.begin(), terms.end(), [](const Monomial& a, const Monomial& b) {
    return powers_before(a.powers, b.powers);
  });
  return terms;
}

std::map<PowerMap, Rational> to_accumulator(const std::vector<Monomial>& terms) {
  std::map<PowerMap, Rational> acc;
  for (const auto& t : terms) acc[t.powers] += t.coeff;
  return acc;
}

}  // namespace

std::string rational_str(const Rational& r) {
  auto num = boost::multiprecision::numerator(r);
  auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double rational_to_double(const Rational& r) { return r.convert_to<double>(); }

unsigned Monomial::degree() const { return power_degree(powers); }

Polynomial Polynomial::constant(const Rational& c) {
  Polynomial p;
  if (c != 0) p.terms_.push_back(Monomial{c, {}});
  return p;
}

Polynomial Polynomial::variable(const std::string& name) {
  Polynomial p;
  p.terms_.push_back(Monomial{1, {{name, 1}}});
  return p;
}

Polynomial Polynomial::monomial(const Rational& coeff, const PowerMap& powers) {
  Polynomial p;
  if (coeff == 0) return p;
  PowerMap cleaned;
  for (const auto& [name, e] : powers) {
    if (e > 0) cleaned.emplace(name, e);
  }
  p.terms_.push_back(Monomial{coeff, std::move(cleaned)});
  return p;
}

Polynomial Polynomial::sum_of(std::vector<Monomial> terms) {
  std::map<PowerMap, Rational> acc;
  for (auto& t : terms) {
    PowerMap cleaned;
    for (const auto& [name, e] : t.powers) {
      if (e > 0) cleaned.emplace(name, e);
    }
    acc[cleaned] += t.coeff;
  }
  Polynomial p;
  p.terms_ = canonicalize(std::move(acc));
  return p;
}

std::set<std::string> Polynomial::names() const {
  std::set<std::string> out;
  for (const auto& t : terms_) {
    for (const auto& [name, e] : t.powers) out.insert(name);
  }
  return out;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  auto acc = to_accumulator(terms_);
  for (const auto& t : other.terms_) acc[t.powers] += t.coeff;
  Polynomial p;
  p.terms_ = canonicalize(std::move(acc));
  return p;
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& t : p.terms_) t.coeff = -t.coeff;
  return p;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  return *this + (-other);
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  std::map<PowerMap, Rational> acc;
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      PowerMap powers = a.powers;
      for (const auto& [name, e] : b.powers) powers[name] += e;
      acc[std::move(powers)] += a.coeff * b.coeff;
    }
  }
  Polynomial p;
  p.terms_ = canonicalize(std::move(acc));
  return p;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial result = Polynomial::constant(1);
  for (unsigned i = 0; i < k; ++i) result = result * *this;
  return result;
}

Polynomial Polynomial::substitute(
    const std::map<std::string, Polynomial>& table) const {
  Polynomial result;
  for (const auto& t : terms_) {
    Polynomial term = Polynomial::constant(t.coeff);
    for (const auto& [name, e] : t.powers) {
      auto it = table.find(name);
      const Polynomial base =
          it != table.end() ? it->second : Polynomial::variable(name);
      term = term * base.pow(e);
    }
    result = result + term;
  }
  return result;
}

Polynomial Polynomial::rename(const std::map<std::string, std::string>& table) const {
  std::map<std::string, Polynomial> subst;
  for (const auto& [from, to] : table) subst.emplace(from, Polynomial::variable(to));
  return substitute(subst);
}

double Polynomial::evaluate(const std::map<std::string, double>& point) const {
  double acc = 0.0;
  for (const auto& t : terms_) {
    double m = rational_to_double(t.coeff);
    for (const auto& [name, e] : t.powers) {
      auto it = point.find(name);
      if (it == point.end()) {
        throw Error(ErrorKind::unbound_name,
                    "no value bound for '" + name + "' during evaluation");
      }
      for (unsigned k = 0; k < e; ++k) m *= it->second;
    }
    acc += m;
  }
  return acc;
}

Rational Polynomial::evaluate_exact(
    const std::map<std::string, Rational>& point) const {
  Rational acc = 0;
  for (const auto& t : terms_) {
    Rational m = t.coeff;
    for (const auto& [name, e] : t.powers) {
      auto it = point.find(name);
      if (it == point.end()) {
        throw Error(ErrorKind::unbound_name,
                    "no value bound for '" + name + "' during evaluation");
      }
      for (unsigned k = 0; k < e; ++k) m *= it->second;
    }
    acc += m;
  }
  return acc;
}

std::string Polynomial::str(const std::vector<std::string>& factor_order) const {
  if (terms_.empty()) return "0";
  auto monomial_body = [&](const Monomial& t) {
    Rational mag = t.coeff < 0 ? Rational(-t.coeff) : t.coeff;
    std::vector<std::string> parts;
    if (t.powers.empty() || mag != 1) parts.push_back(rational_str(mag));
    auto emit = [&](const std::string& name, unsigned e) {
      parts.push_back(e == 1 ? name : name + "^" + std::to_string(e));
    };
    std::set<std::string> done;
    for (const auto& name : factor_order) {
      auto it = t.powers.find(name);
      if (it != t.powers.end() && !done.count(name)) {
        emit(name, it->second);
        done.insert(name);
      }
    }
    for (const auto& [name, e] : t.powers) {
      if (!done.count(name)) emit(name, e);
    }
    std::string body;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i > 0) body += "*";
      body += parts[i];
    }
    return body;
  };

  std::vector<const Monomial*> ordered;
  for (const auto& t : terms_) {
    if (t.coeff > 0) ordered.push_back(&t);
  }
  for (const auto& t : terms_) {
    if (t.coeff < 0) ordered.push_back(&t);
  }
  std::string out;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    bool negative = ordered[i]->coeff < 0;
    if (i == 0) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    out += monomial_body(*ordered[i]);
  }
  return out;
}

bool is_identifier(const std::string& name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') {
    return false;
  }
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' &&
        c != '\'') {
      return false;
    }
  }
  return true;
}

namespace {

struct Token {
  enum Kind { ident, number, plus, minus, star, caret, slash, lparen, rparen, end };
  Kind kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) ||
              text[i] == '_' || text[i] == '.' || text[i] == '\'')) {
        ++i;
      }
      tokens.push_back({Token::ident, text.substr(start, i - start), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        ++i;
      }
      if (i + 1 < text.size() && text[i] == '.' &&
          std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
        ++i;
        while (i < text.size() &&
               std::isdigit(static_cast<unsigned char>(text[i]))) {
          ++i;
        }
      }
      tokens.push_back({Token::number, text.substr(start, i - start), start});
      continue;
    }
    Token::Kind kind;
    switch (c) {
      case '+': kind = Token::plus; break;
      case '-': kind = Token::minus; break;
      case '*': kind = Token::star; break;
      case '^': kind = Token::caret; break;
      case '/': kind = Token::slash; break;
      case '(': kind = Token::lparen; break;
      case ')': kind = Token::rparen; break;
      default:
        throw Error(ErrorKind::parse, "unexpected character '" +
                                          std::string(1, c) + "' at position " +
                                          std::to_string(i));
    }
    tokens.push_back({kind, std::string(1, c), start});
    ++i;
  }
  tokens.push_back({Token::end, "", text.size()});
  return tokens;
}

// cpp_int's string constructor treats a leading 0 as an octal prefix, so
// trim it off to keep every literal decimal.
boost::multiprecision::cpp_int decimal_digits(const std::string& digits) {
  auto first = digits.find_first_not_of('0');
  if (first == std::string::npos) return 0;
  return boost::multiprecision::cpp_int(digits.substr(first));
}

Rational number_value(const Token& tok) {
  auto dot = tok.text.find('.');
  if (dot == std::string::npos) {
    return Rational(decimal_digits(tok.text));
  }
  std::string digits = tok.text.substr(0, dot) + tok.text.substr(dot + 1);
  boost::multiprecision::cpp_int den = 1;
  for (std::size_t k = 0; k < tok.text.size() - dot - 1; ++k) den *= 10;
  return Rational(decimal_digits(digits), den);
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Polynomial parse() {
    Polynomial p = expression();
    expect(Token::end, "end of input");
    return p;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const std::string& wanted) {
    const Token& tok = peek();
    std::string got = tok.kind == Token::end ? "end of input" : "'" + tok.text + "'";
    throw Error(ErrorKind::parse, "expected " + wanted + " but found " + got +
                                      " at position " + std::to_string(tok.pos));
  }

  void expect(Token::Kind kind, const std::string& wanted) {
    if (peek().kind != kind) fail(wanted);
    advance();
  }

  Polynomial expression() {
    Polynomial acc = term();
    while (peek().kind == Token::plus || peek().kind == Token::minus) {
      bool minus = advance().kind == Token::minus;
      Polynomial rhs = term();
      acc = minus ? acc - rhs : acc + rhs;
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = unary();
    while (peek().kind == Token::star) {
      advance();
      acc = acc * unary();
    }
    return acc;
  }

  Polynomial unary() {
    bool negate = false;
    while (peek().kind == Token::minus) {
      advance();
      negate = !negate;
    }
    Polynomial p = power();
    return negate ? -p : p;
  }

  Polynomial power() {
    Polynomial base = atom();
    if (peek().kind == Token::caret) {
      advance();
      if (peek().kind != Token::number || peek().text.find('.') != std::string::npos) {
        fail("a non-negative integer exponent");
      }
      unsigned e = static_cast<unsigned>(std::stoul(advance().text));
      return base.pow(e);
    }
    return base;
  }

  Polynomial atom() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Token::ident:
        return Polynomial::variable(advance().text);
      case Token::number: {
        Rational value = number_value(advance());
        if (peek().kind == Token::slash) {
          advance();
          if (peek().kind != Token::number ||
              peek().text.find('.') != std::string::npos) {
            fail("an integer denominator");
          }
          Rational den = number_value(advance());
          if (den == 0) {
            throw Error(ErrorKind::parse, "zero denominator at position " +
                                              std::to_string(tok.pos));
          }
          value /= den;
        }
        return Polynomial::constant(value);
      }
      case Token::lparen: {
        advance();
        Polynomial p = expression();
        expect(Token::rparen, "')'");
        return p;
      }
      default:
        fail("a name, a number, or '('");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(const std::string& text) {
  return Parser(tokenize(text)).parse();
}

PolyMap::PolyMap(FinSet dom_in, FinSet cod_in, std::vector<Polynomial> comps_in)
    : dom(std::move(dom_in)), cod(std::move(cod_in)), comps(std::move(comps_in)) {
  if (comps.size() != cod.size()) {
    throw Error(ErrorKind::internal,
                "component count does not match the codomain");
  }
}

const Polynomial& PolyMap::at(const std::string& name) const {
  return comps[cod.index_of(name)];
}

std::vector<std::pair<std::string, std::string>> PolyMap::undeclared_names() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    for (const auto& name : comps[i].names()) {
      if (!dom.contains(name)) out.emplace_back(cod.at(i), name);
    }
  }
  return out;
}

}  // namespace rsm
