#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "homog/trigpoly.hpp"

namespace homog {

using SiteOffset = std::vector<int>;  // one integer per dimension

// One shift-generated interaction term: a finite support of lattice offsets
// (containing the origin) and a trig polynomial in the angles at those
// offsets. Poly slots index into `support`.
struct BaseTerm {
  std::vector<SiteOffset> support;
  TrigPoly poly;
};

// The family {J_Lambda}: dimension, interaction range L, and the base terms
// whose lattice shifts generate everything. Never materialized explicitly.
class PotentialSpec {
 public:
  PotentialSpec(int dimension, int range, std::vector<BaseTerm> base_terms);

  int dimension() const { return d_; }
  int range() const { return range_; }
  const std::vector<BaseTerm>& base_terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  // true when the family is a single one-site term (the exact-corrector case)
  bool is_single_site() const;

  // throws ConfigError on violated structural invariants (J-3 range,
  // slot references, origin membership)
  void validate() const;

 private:
  int d_;
  int range_;
  std::vector<BaseTerm> terms_;
};

// l1 diameter of a support set
int support_diameter(const std::vector<SiteOffset>& support);

// Finite box [-half, half]^d with periodic interaction wrap.
class BoxGeometry {
 public:
  BoxGeometry(int dimension, int half_width);

  int dimension() const { return d_; }
  int half_width() const { return half_; }
  int side() const { return side_; }
  int n_sites() const { return n_sites_; }

  int site_index(const SiteOffset& coords) const;  // coords must lie in the box
  SiteOffset site_at(int index) const;
  int shifted_site(int index, const SiteOffset& offset) const;  // periodic wrap
  int l1_norm(int index) const;

  // all sites with |k|_1 <= radius, sorted by linear index
  std::vector<int> l1_ball(int radius) const;

  // shifted configuration (theta^k x)_j = x_{j+k}, wrap on the box
  std::vector<double> shift_configuration(std::span<const double> x, int site_index_k) const;

 private:
  int d_;
  int half_;
  int side_;
  int n_sites_;
};

// PotentialSpec bound to a box: flattened evaluation program for drifts,
// local energies and per-site drift polynomials. Immutable, safe to share
// across threads.
class DriftEvaluator {
 public:
  DriftEvaluator(const PotentialSpec& spec, const BoxGeometry& geom);

  const PotentialSpec& spec() const { return spec_; }
  const BoxGeometry& geom() const { return geom_; }
  int n_sites() const { return geom_.n_sites(); }

  // b_k(x) = -sum_{Lambda contains k} dJ_Lambda/dx_k
  double drift(int site, std::span<const double> x) const;
  void drift_all(std::span<const double> x, std::span<double> out) const;

  // U^Lambda = sum of shifted terms whose support intersects Lambda
  double local_energy(const std::vector<int>& lambda_sites, std::span<const double> x) const;
  // every shifted term on the box exactly once (MALA target energy)
  double total_energy(std::span<const double> x) const;

  // b_k as an explicit TrigPoly over box site slots
  TrigPoly drift_poly(int site) const;

 private:
  struct Op {
    double coeff;
    bool is_sin;
    std::vector<std::pair<int, int>> sites;  // (box site, frequency)
    int instance;                            // shifted-term id, for dedup in local_energy
  };

  PotentialSpec spec_;
  BoxGeometry geom_;
  std::vector<Op> ops_;
  std::vector<std::vector<int>> site_ops_;        // per site: op indices touching it
  std::vector<std::vector<int>> instance_sites_;  // per instance: support site list
  std::vector<std::vector<int>> site_instances_;  // per site: instance ids touching it
};

struct AxiomReport {
  bool periodicity_ok = false;
  bool shift_ok = false;
  bool range_ok = false;
  double periodicity_violation = 0.0;
  double shift_violation = 0.0;
  std::string detail;
  bool all_ok() const { return periodicity_ok && shift_ok && range_ok; }
};

// numeric/structural check of J-1 (periodicity), J-2 (shift covariance of
// the drift) and J-3 (declared finite range)
AxiomReport verify_axioms(const PotentialSpec& spec, const BoxGeometry& geom, int sample_count,
                          std::uint64_t seed);

}  // namespace homog
