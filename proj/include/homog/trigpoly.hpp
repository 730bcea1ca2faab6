#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace homog {

// Real trigonometric polynomial in finitely many angle variables:
//   f(theta) = sum_i c_i * {cos|sin}( sum_j m_ij * theta_{slot_ij} ).
// Integer frequencies make 2*pi periodicity structural and derivatives
// exact. Slots are caller-defined coordinate ids (base-term slots or box
// site indices); terms store them sparsely.
class TrigPoly {
 public:
  struct Term {
    std::vector<std::pair<int, int>> freq;  // (slot, integer frequency), sorted by slot
    double coeff = 0.0;
    bool is_sin = false;
  };

  TrigPoly() = default;

  static TrigPoly constant(double c);
  // c * cos(m . theta) or c * sin(m . theta)
  static TrigPoly harmonic(std::vector<std::pair<int, int>> freq, double coeff, bool is_sin);

  void add_term(std::vector<std::pair<int, int>> freq, double coeff, bool is_sin);

  double operator()(std::span<const double> angles) const;

  TrigPoly derivative(int slot) const;
  TrigPoly operator+(const TrigPoly& other) const;
  TrigPoly operator-(const TrigPoly& other) const;
  TrigPoly operator*(const TrigPoly& other) const;
  TrigPoly scaled(double s) const;

  // mean over the torus with normalized Lebesgue measure
  double mean() const;
  // sum_i |c_i|, an exact bound for sup |f|
  double coeff_abs_sum() const;

  bool depends_on(int slot) const;
  std::vector<int> slots() const;  // sorted distinct slots with nonzero frequency
  int max_slot() const;            // -1 when constant/empty
  bool empty() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  std::string to_string() const;

 private:
  void canonicalize();
  std::vector<Term> terms_;
};

}  // namespace homog
