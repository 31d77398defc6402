// SPDX-License-Identifier: Apache-2.0
#include <weylab/expr.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>

namespace weylab {

enum class Kind { Num, Imag, Coord, Param, Zeta, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Fn { Exp, Log, Sin, Cos, Tan, Sinh, Cosh, Sqrt, Atan, Re, Im, Conj, Abs2 };

namespace {
const std::map<std::string, Fn, std::less<>>& function_table() {
  static const std::map<std::string, Fn, std::less<>> t{
      {"exp", Fn::Exp},   {"log", Fn::Log},   {"sin", Fn::Sin},   {"cos", Fn::Cos},   {"tan", Fn::Tan},
      {"sinh", Fn::Sinh}, {"cosh", Fn::Cosh}, {"sqrt", Fn::Sqrt}, {"atan", Fn::Atan}, {"re", Fn::Re},
      {"im", Fn::Im},     {"conj", Fn::Conj}, {"abs2", Fn::Abs2}};
  return t;
}

const char* function_name(Fn f) {
  for (const auto& [name, fn] : function_table())
    if (fn == f) return name.c_str();
  return "?";
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}
}  // namespace

struct ExprNode {
  Kind kind;
  double value = 0.0;  // Num, Param
  int index = 0;       // Coord
  Fn fn = Fn::Exp;     // Call
  std::string name;    // Param
  std::shared_ptr<const ExprNode> a, b;

  int precedence() const {
    switch (kind) {
      case Kind::Add:
      case Kind::Sub: return 1;
      case Kind::Mul:
      case Kind::Div: return 2;
      case Kind::Neg: return 3;
      case Kind::Pow: return 4;
      default: return 5;
    }
  }

  bool complex() const {
    if (kind == Kind::Imag || kind == Kind::Zeta) return true;
    return (a && a->complex()) || (b && b->complex());
  }
  bool constant() const {
    if (kind == Kind::Coord || kind == Kind::Zeta) return false;
    return (!a || a->constant()) && (!b || b->constant());
  }

  void print(std::string& out, const Scope& scope) const {
    auto child = [&](const ExprNode& c, bool paren) {
      if (paren) out += '(';
      c.print(out, scope);
      if (paren) out += ')';
    };
    switch (kind) {
      case Kind::Num: out += format_number(value); return;
      case Kind::Imag: out += 'i'; return;
      case Kind::Coord: out += scope.coords[index]; return;
      case Kind::Param: out += name; return;
      case Kind::Zeta: out += "zeta"; return;
      case Kind::Call:
        out += function_name(fn);
        child(*a, true);
        return;
      case Kind::Neg:
        out += '-';
        child(*a, a->precedence() < 4);
        return;
      case Kind::Pow:
        child(*a, a->precedence() < 5);
        out += '^';
        child(*b, b->precedence() < 3);
        return;
      default: {
        const int p = precedence();
        child(*a, a->precedence() < p);
        out += kind == Kind::Add ? " + " : kind == Kind::Sub ? " - " : kind == Kind::Mul ? "*" : "/";
        child(*b, b->precedence() <= p);
      }
    }
  }

  std::string text(const Scope& scope) const {
    std::string s;
    print(s, scope);
    return s;
  }

  // Exponent value if it folds to a constant.
  std::optional<Complex> fold() const {
    switch (kind) {
      case Kind::Num: return Complex(value);
      case Kind::Param: return Complex(value);
      case Kind::Imag: return Complex(0, 1);
      case Kind::Neg: {
        auto v = a->fold();
        if (v) return -*v;
        return std::nullopt;
      }
      case Kind::Add:
      case Kind::Sub:
      case Kind::Mul:
      case Kind::Div: {
        auto x = a->fold(), y = b->fold();
        if (!x || !y) return std::nullopt;
        if (kind == Kind::Add) return *x + *y;
        if (kind == Kind::Sub) return *x - *y;
        if (kind == Kind::Mul) return *x * *y;
        return *x / *y;
      }
      default: return std::nullopt;
    }
  }

  template <class T>
  Jet<T> eval(std::span<const RealJet> coords, const Scope& scope, JetSpec spec) const {
    auto annotate = [&](auto&& fn) -> Jet<T> {
      try {
        return fn();
      } catch (const DomainError& e) {
        std::string msg = e.what();
        if (msg.find(" in '") != std::string::npos) throw;
        throw DomainError(msg + " in '" + text(scope) + "'");
      }
    };
    switch (kind) {
      case Kind::Num:
      case Kind::Param: return Jet<T>::constant(spec, T(value));
      case Kind::Imag:
        if constexpr (is_complex<T>::value) return Jet<T>::constant(spec, T(0, 1));
        else throw DomainError("imaginary unit in real evaluation");
      case Kind::Coord: return lift<T>(coords[index]);
      case Kind::Zeta:
        if constexpr (is_complex<T>::value) {
          const auto [re, im] = *scope.complex_pair;
          return lift<T>(coords[re]) + T(0, 1) * lift<T>(coords[im]);
        } else {
          throw DomainError("zeta in real evaluation");
        }
      case Kind::Neg: return -a->eval<T>(coords, scope, spec);
      case Kind::Add: return a->eval<T>(coords, scope, spec) + b->eval<T>(coords, scope, spec);
      case Kind::Sub: return a->eval<T>(coords, scope, spec) - b->eval<T>(coords, scope, spec);
      case Kind::Mul: return a->eval<T>(coords, scope, spec) * b->eval<T>(coords, scope, spec);
      case Kind::Div: {
        auto x = a->eval<T>(coords, scope, spec);
        auto y = b->eval<T>(coords, scope, spec);
        return annotate([&] { return x / y; });
      }
      case Kind::Pow: {
        auto x = a->eval<T>(coords, scope, spec);
        auto e = b->fold();
        if (e && e->imag() == 0.0) {
          const double p = e->real();
          if (p == std::round(p) && std::abs(p) <= 64) return annotate([&] { return pow_int(x, static_cast<long>(p)); });
          return annotate([&] { return pow(x, p); });
        }
        auto y = b->eval<T>(coords, scope, spec);
        return annotate([&] { return exp(y * log(x)); });
      }
      case Kind::Call: {
        auto x = a->eval<T>(coords, scope, spec);
        return annotate([&]() -> Jet<T> {
          switch (fn) {
            case Fn::Exp: return exp(x);
            case Fn::Log: return log(x);
            case Fn::Sin: return sin(x);
            case Fn::Cos: return cos(x);
            case Fn::Tan: return tan(x);
            case Fn::Sinh: return sinh(x);
            case Fn::Cosh: return cosh(x);
            case Fn::Sqrt: return sqrt(x);
            case Fn::Atan: return atan(x);
            case Fn::Re:
              if constexpr (is_complex<T>::value) return to_complex(real_part(x));
              else return x;
            case Fn::Im:
              if constexpr (is_complex<T>::value) return to_complex(imag_part(x));
              else return Jet<T>(spec);
            case Fn::Conj:
              if constexpr (is_complex<T>::value) return conj(x);
              else return x;
            case Fn::Abs2:
              if constexpr (is_complex<T>::value) return to_complex(real_part(x * conj(x)));
              else return x * x;
          }
          return x;
        });
      }
    }
    throw Error("corrupt expression node");
  }

  template <class T>
  static Jet<T> lift(const RealJet& j) {
    if constexpr (is_complex<T>::value) return to_complex(j);
    else return j;
  }
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  Parser(std::string_view src, const Scope& scope) : s_(src), scope_(scope) {}

  NodePtr parse() {
    auto e = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
    return e;
  }

 private:
  std::string_view s_;
  const Scope& scope_;
  std::size_t pos_ = 0;

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (eat('+')) lhs = make(Kind::Add, lhs, term());
      else if (eat('-')) lhs = make(Kind::Sub, lhs, term());
      else return lhs;
    }
  }
  NodePtr term() {
    auto lhs = factor();
    for (;;) {
      if (eat('*')) lhs = make(Kind::Mul, lhs, factor());
      else if (eat('/')) lhs = make(Kind::Div, lhs, factor());
      else return lhs;
    }
  }
  NodePtr factor() {
    if (eat('-')) {
      auto b = power();
      return make(Kind::Neg, b);
    }
    return power();
  }
  NodePtr power() {
    auto b = base();
    if (eat('^')) return make(Kind::Pow, b, factor());
    return b;
  }
  NodePtr base() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }
  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        pos_ = p;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + pos_) throw ParseError("malformed number", start);
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Num;
    n->value = v;
    return n;
  }
  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string id(s_.substr(start, pos_ - start));
    auto fit = function_table().find(id);
    if (fit != function_table().end()) {
      if (!eat('(')) throw ParseError("expected '(' after function " + id, pos_);
      auto arg = expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      auto n = std::make_shared<ExprNode>();
      n->kind = Kind::Call;
      n->fn = fit->second;
      n->a = arg;
      return n;
    }
    auto n = std::make_shared<ExprNode>();
    for (std::size_t k = 0; k < scope_.coords.size(); ++k) {
      if (scope_.coords[k] == id) {
        n->kind = Kind::Coord;
        n->index = static_cast<int>(k);
        return n;
      }
    }
    if (auto p = scope_.params.find(id); p != scope_.params.end()) {
      n->kind = Kind::Param;
      n->name = id;
      n->value = p->second;
      return n;
    }
    if (id == "zeta" && scope_.complex_pair) {
      n->kind = Kind::Zeta;
      return n;
    }
    if (id == "i") {
      n->kind = Kind::Imag;
      return n;
    }
    throw UndeclaredIdentifier(id);
  }
};

}  // namespace

Expr::Expr() : scope_(std::make_shared<Scope>()) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::Num;
  root_ = n;
}

Expr Expr::number(double v) {
  Expr e;
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::Num;
  n->value = v;
  if (v < 0) {
    n->value = -v;
    e.root_ = make(Kind::Neg, n);
  } else {
    e.root_ = n;
  }
  return e;
}

Expr Expr::parse(std::string_view source, const Scope& scope) {
  Expr e;
  e.scope_ = std::make_shared<Scope>(scope);
  Parser p(source, *e.scope_);
  e.root_ = p.parse();
  return e;
}

std::string Expr::str() const { return root_->text(*scope_); }
bool Expr::needs_complex() const { return root_->complex(); }
bool Expr::is_constant() const { return root_->constant(); }
const Scope& Expr::scope() const { return *scope_; }

ComplexJet Expr::eval_complex(std::span<const RealJet> coords) const {
  if (coords.size() != scope_->coords.size()) throw SpecMismatch("expression evaluated with wrong coordinate count");
  return root_->eval<Complex>(coords, *scope_, coords.empty() ? JetSpec{1, 0} : coords[0].spec());
}

RealJet Expr::eval_real(std::span<const RealJet> coords) const {
  if (coords.size() != scope_->coords.size()) throw SpecMismatch("expression evaluated with wrong coordinate count");
  const JetSpec spec = coords.empty() ? JetSpec{1, 0} : coords[0].spec();
  if (!needs_complex()) return root_->eval<double>(coords, *scope_, spec);
  ComplexJet c = root_->eval<Complex>(coords, *scope_, spec);
  RealJet re = real_part(c);
  const double scale = std::max(1.0, max_abs(re));
  if (max_abs(imag_part(c)) > kRealValuedTolerance * scale)
    throw DomainError("real-valued expression '" + str() + "' has imaginary part " +
                      std::to_string(max_abs(imag_part(c))));
  return re;
}

namespace {
std::vector<RealJet> coordinate_jets(std::span<const double> point, int order) {
  std::vector<RealJet> c;
  const int n = std::max<int>(1, static_cast<int>(point.size()));
  for (std::size_t k = 0; k < point.size(); ++k) c.push_back(RealJet::variable({n, order}, static_cast<int>(k), point[k]));
  return c;
}
}  // namespace

RealJet Expr::eval_at(std::span<const double> point, int order) const { return eval_real(coordinate_jets(point, order)); }
ComplexJet Expr::eval_complex_at(std::span<const double> point, int order) const {
  return eval_complex(coordinate_jets(point, order));
}
double Expr::value_at(std::span<const double> point) const { return eval_at(point, 0).value(); }

double holomorphy_residual(const Expr& e, std::span<const double> point, int order) {
  const auto& scope = e.scope();
  if (!scope.complex_pair) throw UsageError("holomorphy check needs a chart with a complex coordinate pair");
  if (order < 1) throw OrderDeficit("holomorphy residual", 1 - order);
  ComplexJet f = e.eval_complex_at(point, order);
  RealJet u = real_part(f), v = imag_part(f);
  const auto [x, y] = *scope.complex_pair;
  return std::max(max_abs(partial(u, x) - partial(v, y)), max_abs(partial(u, y) + partial(v, x)));
}

}  // namespace weylab
