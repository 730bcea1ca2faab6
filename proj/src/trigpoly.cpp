#include "homog/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace homog {

namespace {

void strip_zero_freqs(std::vector<std::pair<int, int>>& freq) {
  std::erase_if(freq, [](const auto& p) { return p.second == 0; });
  std::sort(freq.begin(), freq.end());
}

// canonical sign: first (lowest-slot) frequency positive;
// cos is even, sin is odd under negation of the whole frequency vector
void normalize_sign(std::vector<std::pair<int, int>>& freq, double& coeff, bool is_sin) {
  if (freq.empty()) return;
  if (freq.front().second < 0) {
    for (auto& p : freq) p.second = -p.second;
    if (is_sin) coeff = -coeff;
  }
}

}  // namespace

TrigPoly TrigPoly::constant(double c) {
  TrigPoly p;
  p.add_term({}, c, false);
  return p;
}

TrigPoly TrigPoly::harmonic(std::vector<std::pair<int, int>> freq, double coeff, bool is_sin) {
  TrigPoly p;
  p.add_term(std::move(freq), coeff, is_sin);
  return p;
}

void TrigPoly::add_term(std::vector<std::pair<int, int>> freq, double coeff, bool is_sin) {
  strip_zero_freqs(freq);
  if (freq.empty() && is_sin) return;  // sin(0) == 0
  normalize_sign(freq, coeff, is_sin);
  terms_.push_back(Term{std::move(freq), coeff, is_sin});
  canonicalize();
}

void TrigPoly::canonicalize() {
  std::map<std::pair<std::vector<std::pair<int, int>>, bool>, double> merged;
  double max_abs = 0.0;
  for (auto& t : terms_) {
    merged[{t.freq, t.is_sin}] += t.coeff;
  }
  for (auto& [key, c] : merged) max_abs = std::max(max_abs, std::abs(c));
  terms_.clear();
  const double tol = max_abs * 1e-15;
  for (auto& [key, c] : merged) {
    if (std::abs(c) <= tol) continue;
    terms_.push_back(Term{key.first, c, key.second});
  }
}

double TrigPoly::operator()(std::span<const double> angles) const {
  double out = 0.0;
  for (const auto& t : terms_) {
    double phase = 0.0;
    for (const auto& [slot, f] : t.freq) phase += f * angles[static_cast<std::size_t>(slot)];
    out += t.coeff * (t.is_sin ? std::sin(phase) : std::cos(phase));
  }
  return out;
}

TrigPoly TrigPoly::derivative(int slot) const {
  TrigPoly out;
  for (const auto& t : terms_) {
    int f = 0;
    for (const auto& [s, m] : t.freq) {
      if (s == slot) {
        f = m;
        break;
      }
    }
    if (f == 0) continue;
    // d/dx [c cos(p)] = -c f sin(p);  d/dx [c sin(p)] = c f cos(p)
    if (t.is_sin) {
      out.terms_.push_back(Term{t.freq, t.coeff * f, false});
    } else {
      out.terms_.push_back(Term{t.freq, -t.coeff * f, true});
    }
  }
  out.canonicalize();
  return out;
}

TrigPoly TrigPoly::operator+(const TrigPoly& other) const {
  TrigPoly out = *this;
  for (const auto& t : other.terms_) out.terms_.push_back(t);
  out.canonicalize();
  return out;
}

TrigPoly TrigPoly::operator-(const TrigPoly& other) const {
  return *this + other.scaled(-1.0);
}

TrigPoly TrigPoly::scaled(double s) const {
  TrigPoly out = *this;
  for (auto& t : out.terms_) t.coeff *= s;
  out.canonicalize();
  return out;
}

TrigPoly TrigPoly::operator*(const TrigPoly& other) const {
  // product-to-sum on every term pair
  TrigPoly out;
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      std::map<int, int> sum, diff;
      for (const auto& [s, f] : a.freq) {
        sum[s] += f;
        diff[s] += f;
      }
      for (const auto& [s, f] : b.freq) {
        sum[s] += f;
        diff[s] -= f;
      }
      auto to_vec = [](const std::map<int, int>& m) {
        std::vector<std::pair<int, int>> v;
        for (const auto& [s, f] : m)
          if (f != 0) v.emplace_back(s, f);
        return v;
      };
      auto fs = to_vec(sum);
      auto fd = to_vec(diff);
      double c = 0.5 * a.coeff * b.coeff;
      if (!a.is_sin && !b.is_sin) {
        // cos cos = (cos(d) + cos(s))/2
        out.add_term(fd, c, false);
        out.add_term(fs, c, false);
      } else if (a.is_sin && b.is_sin) {
        // sin sin = (cos(d) - cos(s))/2
        out.add_term(fd, c, false);
        out.add_term(fs, -c, false);
      } else if (a.is_sin && !b.is_sin) {
        // sin cos = (sin(s) + sin(d))/2
        out.add_term(fs, c, true);
        out.add_term(fd, c, true);
      } else {
        // cos sin = (sin(s) - sin(d))/2
        out.add_term(fs, c, true);
        out.add_term(fd, -c, true);
      }
    }
  }
  return out;
}

double TrigPoly::mean() const {
  for (const auto& t : terms_) {
    if (t.freq.empty() && !t.is_sin) return t.coeff;
  }
  return 0.0;
}

double TrigPoly::coeff_abs_sum() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

bool TrigPoly::depends_on(int slot) const {
  for (const auto& t : terms_) {
    for (const auto& [s, f] : t.freq) {
      if (s == slot && f != 0) return true;
    }
  }
  return false;
}

std::vector<int> TrigPoly::slots() const {
  std::vector<int> out;
  for (const auto& t : terms_) {
    for (const auto& [s, f] : t.freq) {
      if (f != 0) out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int TrigPoly::max_slot() const {
  int m = -1;
  for (const auto& t : terms_) {
    for (const auto& [s, f] : t.freq) m = std::max(m, s);
  }
  return m;
}

std::string TrigPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << t.coeff;
    if (t.freq.empty()) continue;
    os << "*" << (t.is_sin ? "sin(" : "cos(");
    bool f1 = true;
    for (const auto& [s, f] : t.freq) {
      if (!f1) os << (f >= 0 ? "+" : "");
      f1 = false;
      if (f == 1)
        os << "t" << s;
      else if (f == -1)
        os << "-t" << s;
      else
        os << f << "*t" << s;
    }
    os << ")";
  }
  return os.str();
}

}  // namespace homog
