#include "brickelast/polynomial.hpp"

#include <sstream>
#include <stdexcept>

namespace brickelast {

namespace {

void check_exponent(int e) {
  if (e < 0) throw std::invalid_argument("Monomial: negative exponent");
  if (e > Monomial::kMaxExponent)
    throw std::domain_error("Monomial: per-variable degree cap (8) exceeded");
}

Rational rational_pow(const Rational& x, int n) {
  Rational r(1);
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

}  // namespace

Monomial::Monomial(int e1, int e2, int e3) : e{e1, e2, e3} {
  for (int v : e) check_exponent(v);
}

Monomial Monomial::operator*(const Monomial& o) const {
  return Monomial(e[0] + o.e[0], e[1] + o.e[1], e[2] + o.e[2]);
}

Poly::Poly(const Rational& c) {
  if (!brickelast::is_zero(c)) terms_[Monomial()] = c;
}

Poly Poly::term(const Monomial& m, const Rational& c) {
  Poly p;
  if (!brickelast::is_zero(c)) p.terms_[m] = c;
  return p;
}

Poly Poly::variable(int axis) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("Poly::variable: axis must be 1..3");
  std::array<int, 3> e{0, 0, 0};
  e[axis - 1] = 1;
  return term(Monomial(e[0], e[1], e[2]), Rational(1));
}

int Poly::degree(int axis) const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.e[axis - 1]);
  return d;
}

int Poly::total_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
  return d;
}

void Poly::set(const Monomial& m, const Rational& c) {
  if (brickelast::is_zero(c))
    terms_.erase(m);
  else
    terms_[m] = c;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) {
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_[m] = c;
    } else {
      it->second += c;
      if (brickelast::is_zero(it->second)) terms_.erase(it);
    }
  }
  return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += -o; }

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  r += o;
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  r += -o;
  return r;
}

Poly Poly::operator-() const {
  Poly r;
  for (const auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m = ma * mb;
      auto it = r.terms_.find(m);
      if (it == r.terms_.end()) {
        Rational c = ca * cb;
        if (!brickelast::is_zero(c)) r.terms_[m] = c;
      } else {
        it->second += ca * cb;
        if (brickelast::is_zero(it->second)) r.terms_.erase(it);
      }
    }
  return r;
}

Poly Poly::operator*(const Rational& s) const {
  Poly r;
  if (brickelast::is_zero(s)) return r;
  for (const auto& [m, c] : terms_) r.terms_[m] = c * s;
  return r;
}

Rational Poly::eval(const std::array<Rational, 3>& x) const {
  Rational sum(0);
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < 3; ++i) t *= rational_pow(x[i], m.e[i]);
    sum += t;
  }
  return sum;
}

double Poly::eval(const Vec3& x) const {
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = to_double(c);
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < m.e[i]; ++k) t *= x[i];
    sum += t;
  }
  return sum;
}

Poly Poly::derivative(int axis) const {
  Poly r;
  int a = axis - 1;
  for (const auto& [m, c] : terms_) {
    if (m.e[a] == 0) continue;
    std::array<int, 3> e = m.e;
    e[a] -= 1;
    r.set(Monomial(e[0], e[1], e[2]), c * m.e[a]);
  }
  return r;
}

Poly Poly::restrict_axis(int axis, const Rational& value) const {
  Poly r;
  int a = axis - 1;
  for (const auto& [m, c] : terms_) {
    std::array<int, 3> e = m.e;
    int p = e[a];
    e[a] = 0;
    Monomial reduced(e[0], e[1], e[2]);
    Rational add = c * rational_pow(value, p);
    auto it = r.terms_.find(reduced);
    if (it == r.terms_.end()) {
      if (!brickelast::is_zero(add)) r.terms_[reduced] = add;
    } else {
      it->second += add;
      if (brickelast::is_zero(it->second)) r.terms_.erase(it);
    }
  }
  return r;
}

Poly Poly::integrate_axis(int axis, const Rational& lo, const Rational& hi) const {
  Poly r;
  int a = axis - 1;
  for (const auto& [m, c] : terms_) {
    std::array<int, 3> e = m.e;
    int p = e[a];
    e[a] = 0;
    Monomial reduced(e[0], e[1], e[2]);
    Rational add = c * (rational_pow(hi, p + 1) - rational_pow(lo, p + 1)) / (p + 1);
    auto it = r.terms_.find(reduced);
    if (it == r.terms_.end()) {
      if (!brickelast::is_zero(add)) r.terms_[reduced] = add;
    } else {
      it->second += add;
      if (brickelast::is_zero(it->second)) r.terms_.erase(it);
    }
  }
  return r;
}

Poly Poly::affine_substitute(const std::array<Rational, 3>& scale,
                             const std::array<Rational, 3>& shift) const {
  // Precompute (s_i x_i + t_i)^k for each axis up to the degree present.
  std::array<std::vector<Poly>, 3> powers;
  for (int i = 0; i < 3; ++i) {
    Poly base = Poly::variable(i + 1) * scale[i] + Poly(shift[i]);
    powers[i].push_back(Poly(Rational(1)));
    int d = degree(i + 1);
    for (int k = 1; k <= d; ++k) powers[i].push_back(powers[i].back() * base);
  }
  Poly r;
  for (const auto& [m, c] : terms_) {
    Poly t(c);
    for (int i = 0; i < 3; ++i) t = t * powers[i][m.e[i]];
    r += t;
  }
  return r;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational a = c;
    if (first) {
      if (sgn(a) < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (sgn(a) < 0 ? " - " : " + ");
      if (sgn(a) < 0) a = -a;
    }
    first = false;
    bool unit_coeff = (a == 1) && m.total_degree() > 0;
    if (!unit_coeff) os << a.get_str();
    bool printed = !unit_coeff;
    for (int i = 0; i < 3; ++i) {
      if (m.e[i] == 0) continue;
      if (printed) os << "*";
      os << "x" << (i + 1);
      if (m.e[i] > 1) os << "^" << m.e[i];
      printed = true;
    }
  }
  return os.str();
}

Rational integrate_box(const Poly& p, const RatBox& box) {
  Rational sum(0);
  for (const auto& [m, c] : p.terms()) {
    Rational t = c;
    for (int i = 0; i < 3; ++i) {
      int n = m.e[i] + 1;
      t *= (rational_pow(box.hi[i], n) - rational_pow(box.lo[i], n)) / n;
    }
    sum += t;
  }
  return sum;
}

DPoly::DPoly(const Poly& p) {
  terms_.reserve(p.terms().size());
  for (const auto& [m, c] : p.terms()) terms_.push_back({m.e, to_double(c)});
}

double DPoly::eval(const Vec3& x) const {
  double sum = 0.0;
  for (const Term& t : terms_) {
    double v = t.c;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < t.e[i]; ++k) v *= x[i];
    sum += v;
  }
  return sum;
}

}  // namespace brickelast
