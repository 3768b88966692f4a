#include "snakelab/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <stdexcept>

#include "snakelab/errors.hpp"

namespace snakelab {

namespace {

constexpr std::size_t kMatrixCap = 4096;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Per-snake lookup tables shared by the pairwise subroutines.
struct EnsembleIndex {
  std::size_t n = 0;                          // vertices
  std::vector<std::int32_t> last;             // snake-major last visit index, -1 unvisited
  std::vector<std::vector<Vertex>> distinct;  // distinct vertices per snake

  EnsembleIndex(const SnakeEnsemble& ensemble, std::size_t vertex_count) : n(vertex_count) {
    const std::size_t m = ensemble.snakes.size();
    last.assign(m * n, -1);
    distinct.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      std::int32_t* row = last.data() + i * n;
      for (std::size_t k = 0; k < ensemble.snakes[i].vertices.size(); ++k) {
        const Vertex v = ensemble.snakes[i].vertices[k];
        if (row[v] < 0) distinct[i].push_back(v);
        row[v] = static_cast<std::int32_t>(k);
      }
      std::sort(distinct[i].begin(), distinct[i].end());
    }
  }

  const std::int32_t* row(std::size_t i) const { return last.data() + i * n; }

  bool consistent(std::size_t i, std::size_t j) const {
    const std::int32_t* ri = row(i);
    const std::int32_t* rj = row(j);
    for (Vertex v : distinct[i]) {
      if (rj[v] >= 0 && rj[v] != ri[v]) return false;
    }
    return true;
  }
};

void require_matrix_fit(std::size_t m, const char* what) {
  if (m > kMatrixCap) {
    throw SizeLimitError(std::string(what) + ": ensemble of " + std::to_string(m) +
                         " snakes exceeds the dense-matrix cap of " + std::to_string(kMatrixCap));
  }
}

}  // namespace

double SquareMatrix::sum() const {
  double total = 0.0;
  for (double x : a) total += x;
  return total;
}

double SquareMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      worst = std::max(worst, std::abs(at(i, j) - at(j, i)));
    }
  }
  return worst;
}

SnakeEnsemble enumerate_snake_support(const SnakeSampler& sampler, Vertex x0, std::uint64_t cap) {
  const std::size_t sup = sampler.support().size();
  const unsigned chunks = sampler.params().ell + 1;
  double estimate = 1.0;
  for (unsigned k = 0; k < chunks; ++k) estimate *= static_cast<double>(sup);
  if (estimate > static_cast<double>(cap)) {
    throw SizeLimitError("ensemble enumeration needs " + fmt(estimate) +
                         " seed tuples, cap is " + std::to_string(cap));
  }

  SnakeEnsemble ensemble;
  ensemble.params = sampler.params();
  ensemble.head = x0;

  std::map<std::vector<Vertex>, std::size_t> index_of;
  std::vector<std::size_t> odo(chunks, 0);
  std::vector<Vertex> seeds(chunks);
  for (;;) {
    ++ensemble.seed_tuples;
    double prob = 1.0;
    for (unsigned k = 0; k < chunks; ++k) {
      seeds[k] = sampler.support()[odo[k]];
      prob *= sampler.support_weights()[odo[k]];
    }
    Snake snake = sampler.assemble(x0, seeds);
    auto [it, inserted] = index_of.try_emplace(snake.vertices, ensemble.snakes.size());
    if (inserted) {
      ensemble.snakes.push_back(std::move(snake));
      ensemble.p.push_back(prob);
    } else {
      ensemble.p[it->second] += prob;
      ++ensemble.merge_count;
    }

    std::size_t pos = 0;
    while (pos < chunks && ++odo[pos] == sup) {
      odo[pos] = 0;
      ++pos;
    }
    if (pos == chunks) break;
  }

  // Canonical order: lexicographic by vertex sequence.
  std::vector<std::size_t> perm(ensemble.snakes.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return ensemble.snakes[a].vertices < ensemble.snakes[b].vertices;
  });
  SnakeEnsemble sorted;
  sorted.params = ensemble.params;
  sorted.head = ensemble.head;
  sorted.seed_tuples = ensemble.seed_tuples;
  sorted.merge_count = ensemble.merge_count;
  sorted.snakes.reserve(perm.size());
  sorted.p.reserve(perm.size());
  for (std::size_t i : perm) {
    sorted.snakes.push_back(std::move(ensemble.snakes[i]));
    sorted.p.push_back(ensemble.p[i]);
  }

  double mass = 0.0;
  for (double q : sorted.p) mass += q;
  if (std::abs(mass - 1.0) > 1e-9) {
    throw std::logic_error("ensemble probabilities sum to " + fmt(mass));
  }
  return sorted;
}

SquareMatrix w_matrix(const SnakeEnsemble& ensemble) {
  const std::size_t m = ensemble.snakes.size();
  require_matrix_fit(m, "w_matrix");
  const unsigned ell = ensemble.params.ell;
  const unsigned s = ensemble.params.s;

  SquareMatrix w(m);
  // Snakes are in lexicographic order, so snakes sharing a prefix are
  // contiguous: group runs per flick boundary.
  for (unsigned flick = 1; flick <= ell; ++flick) {
    const std::size_t prefix_len = static_cast<std::size_t>(s) * flick + 1;
    std::size_t lo = 0;
    while (lo < m) {
      std::size_t hi = lo + 1;
      auto same_prefix = [&](std::size_t a, std::size_t b) {
        return std::equal(ensemble.snakes[a].vertices.begin(),
                          ensemble.snakes[a].vertices.begin() + prefix_len,
                          ensemble.snakes[b].vertices.begin());
      };
      while (hi < m && same_prefix(lo, hi)) ++hi;
      double q = 0.0;
      for (std::size_t i = lo; i < hi; ++i) q += ensemble.p[i];
      for (std::size_t i = lo; i < hi; ++i) {
        for (std::size_t j = lo; j < hi; ++j) {
          w.at(i, j) += ensemble.p[i] * (ensemble.p[j] / q) / ell;
        }
      }
      lo = hi;
    }
  }
  return w;
}

EnsembleGoodness ensemble_goodness(const SnakeEnsemble& ensemble, const SnakeSampler& sampler,
                                   std::uint64_t budget) {
  const std::size_t m = ensemble.snakes.size();
  const SnakeParams& params = sampler.params();
  EnsembleGoodness g;
  g.consistency.resize(m);
  g.hitting_max.resize(m);
  g.good.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    g.consistency[i] = consistency_probability_exact(sampler, ensemble.snakes[i], budget).probability;
    g.hitting_max[i] = hitting_probabilities_exact(sampler, ensemble.snakes[i], budget).max_prob;
    g.good[i] = g.consistency[i] >= params.consist_threshold &&
                g.hitting_max[i] <= params.eps + 1e-12;
    if (g.good[i]) {
      g.good_fraction += ensemble.p[i];
      g.eps_exact = std::max(g.eps_exact, g.hitting_max[i]);
      g.min_good_consistency = std::min(g.min_good_consistency, g.consistency[i]);
    }
  }
  return g;
}

SquareMatrix relation_matrix(const SnakeEnsemble& ensemble, const SquareMatrix& w,
                             const std::vector<char>* good_filter) {
  const std::size_t m = ensemble.snakes.size();
  require_matrix_fit(m, "relation_matrix");
  if (w.n != m) throw std::invalid_argument("relation_matrix: w size mismatch");
  if (good_filter != nullptr && good_filter->size() != m) {
    throw std::invalid_argument("relation_matrix: goodness filter size mismatch");
  }
  std::size_t n = 0;
  for (const Snake& snake : ensemble.snakes) {
    for (Vertex v : snake.vertices) n = std::max<std::size_t>(n, v + 1);
  }
  const EnsembleIndex index(ensemble, n);

  SquareMatrix R(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (good_filter != nullptr && !(*good_filter)[i]) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (w.at(i, j) == 0.0) continue;
      if (good_filter != nullptr && !(*good_filter)[j]) continue;
      if (ensemble.snakes[i].tail_end() == ensemble.snakes[j].tail_end()) continue;
      if (!index.consistent(i, j)) continue;
      R.at(i, j) = w.at(i, j);
    }
  }
  return R;
}

AdversaryScores adversary_scores(const SnakeEnsemble& ensemble, const SquareMatrix& R) {
  const std::size_t m = ensemble.snakes.size();
  require_matrix_fit(m, "adversary_scores");
  if (R.n != m) throw std::invalid_argument("adversary_scores: relation size mismatch");
  std::size_t n = 0;
  for (const Snake& snake : ensemble.snakes) {
    for (Vertex v : snake.vertices) n = std::max<std::size_t>(n, v + 1);
  }
  const EnsembleIndex index(ensemble, n);

  AdversaryScores scores;
  scores.vertex_count = n;
  scores.M_A.assign(m, 0.0);
  scores.M_B.assign(m, 0.0);
  scores.M_A_v.assign(m * n, 0.0);
  scores.M_B_v.assign(m * n, 0.0);

  // Vertices where exactly one of the two snakes' vertex sets contains v.
  auto for_symmetric_difference = [&](std::size_t i, std::size_t j, auto&& fn) {
    const std::int32_t* ri = index.row(i);
    const std::int32_t* rj = index.row(j);
    for (Vertex v : index.distinct[i]) {
      if (rj[v] < 0) fn(v);
    }
    for (Vertex v : index.distinct[j]) {
      if (ri[v] < 0) fn(v);
    }
  };

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double r = R.at(i, j);
      if (r == 0.0) continue;
      scores.M_A[i] += r;
      scores.M_B[j] += r;
      for_symmetric_difference(i, j, [&](Vertex v) {
        scores.M_A_v[i * n + v] += r;
        scores.M_B_v[j * n + v] += r;
      });
    }
  }

  double best_max = 0.0, best_geom = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (R.at(i, j) == 0.0) continue;
      for_symmetric_difference(i, j, [&](Vertex v) {
        const double ra = scores.M_A[i] / scores.M_A_v[i * n + v];
        const double rb = scores.M_B[j] / scores.M_B_v[j * n + v];
        const double cand_max = std::max(ra, rb);
        const double cand_geom = std::sqrt(ra * rb);
        if (!scores.defined || cand_max < best_max) {
          best_max = cand_max;
          scores.argmin_x = i;
          scores.argmin_y = j;
          scores.argmin_v = v;
        }
        if (!scores.defined || cand_geom < best_geom) best_geom = cand_geom;
        scores.defined = true;
      });
    }
  }
  if (scores.defined) {
    scores.m_max = best_max;
    scores.m_geom = best_geom;
  }
  return scores;
}

std::vector<std::size_t> lemma8_subset(const std::vector<double>& p, const SquareMatrix& R,
                                       double r) {
  const std::size_t m = p.size();
  if (R.n != m) throw std::invalid_argument("lemma8_subset: size mismatch");
  if (m == 0) throw std::invalid_argument("lemma8_subset: empty input");
  double mass = 0.0;
  for (double q : p) {
    if (!(q > 0.0)) throw std::invalid_argument("lemma8_subset: probabilities must be positive");
    mass += q;
  }
  if (mass > 1.0 + 1e-9) {
    throw std::invalid_argument("lemma8_subset: probabilities sum to " + fmt(mass) + " > 1");
  }
  if (R.max_asymmetry() > 1e-9) {
    throw std::invalid_argument("lemma8_subset: relation matrix is not symmetric");
  }
  const double total = R.sum();
  if (total < r - 1e-12) {
    throw std::invalid_argument("lemma8_subset: relation sum " + fmt(total) +
                                " is below r = " + fmt(r));
  }

  std::vector<char> alive(m, 1);
  std::vector<double> row_sum(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) row_sum[i] += R.at(i, j);
  }

  // Deleting a batch of violators equals deleting them one at a time: row
  // sums only shrink, so a violator stays one while others are removed.
  std::vector<std::size_t> doomed;
  for (;;) {
    doomed.clear();
    for (std::size_t i = 0; i < m; ++i) {
      if (alive[i] && row_sum[i] < r * p[i] / 2.0 - 1e-15) doomed.push_back(i);
    }
    if (doomed.empty()) break;
    for (std::size_t j : doomed) alive[j] = 0;
    for (std::size_t j : doomed) {
      for (std::size_t i = 0; i < m; ++i) {
        if (alive[i]) row_sum[i] -= R.at(i, j);
      }
    }
  }

  std::vector<std::size_t> subset;
  for (std::size_t i = 0; i < m; ++i) {
    if (alive[i]) subset.push_back(i);
  }
  if (subset.empty()) {
    throw std::logic_error("lemma8_subset: pruning emptied the set although sum p = " +
                           fmt(mass) + " <= 1 and sum R = " + fmt(total) + " >= r = " + fmt(r));
  }

  // Independent post-verification against the original matrix.
  for (std::size_t i : subset) {
    double s = 0.0;
    for (std::size_t j : subset) s += R.at(i, j);
    if (s < r * p[i] / 2.0 - 1e-12) {
      throw std::logic_error("lemma8_subset: post-verification failed at index " +
                             std::to_string(i) + ": " + fmt(s) + " < " + fmt(r * p[i] / 2.0));
    }
  }
  return subset;
}

Theorem2Report theorem2_report(const SnakeEnsemble& ensemble, const SnakeSampler& sampler,
                               std::uint64_t budget) {
  const EnsembleGoodness goodness = ensemble_goodness(ensemble, sampler, budget);
  const SquareMatrix w = w_matrix(ensemble);
  const SquareMatrix R = relation_matrix(ensemble, w, &goodness.good);

  Theorem2Report rep;
  rep.good_fraction = goodness.good_fraction;
  rep.min_good_consistency = goodness.min_good_consistency;
  rep.eps = goodness.eps_exact;
  rep.relation_sum = R.sum();
  rep.hypotheses_met = true;
  if (rep.good_fraction < 0.9 - 1e-12) {
    rep.hypotheses_met = false;
    rep.failing_clause = "good fraction " + fmt(rep.good_fraction) + " < 0.9";
  }
  if (rep.relation_sum < 0.6 - 1e-12) {
    rep.hypotheses_met = false;
    if (!rep.failing_clause.empty()) rep.failing_clause += "; ";
    rep.failing_clause += "relation sum " + fmt(rep.relation_sum) + " < 0.6";
  }

  if (rep.relation_sum > 0.0) {
    rep.lemma8_r = std::min(0.6, rep.relation_sum);
    rep.subset = lemma8_subset(ensemble.p, R, rep.lemma8_r);
    rep.subset_verified = true;

    SquareMatrix restricted(R.n);
    for (std::size_t i : rep.subset) {
      for (std::size_t j : rep.subset) restricted.at(i, j) = R.at(i, j);
    }
    bool first = true;
    for (std::size_t i : rep.subset) {
      double row = 0.0;
      for (std::size_t j : rep.subset) row += restricted.at(i, j);
      const double score = row / ensemble.p[i];
      if (first || score < rep.min_restricted_score) rep.min_restricted_score = score;
      first = false;
    }

    const AdversaryScores scores = adversary_scores(ensemble, restricted);
    rep.scores_defined = scores.defined;
    rep.m_max = scores.m_max;
    rep.m_geom = scores.m_geom;
  } else {
    rep.failing_clause += rep.failing_clause.empty() ? "relation sum is zero"
                                                     : "; relation sum is zero";
  }

  if (rep.eps > 0.0) {
    rep.target_m_max = 0.3 / rep.eps;
    rep.target_m_geom = std::sqrt(0.3 / rep.eps);
    rep.m_max_ok = rep.scores_defined && rep.m_max >= rep.target_m_max - 1e-9;
    rep.m_geom_ok = rep.scores_defined && rep.m_geom >= rep.target_m_geom - 1e-9;
  }
  return rep;
}

std::string Theorem2Report::to_text() const {
  std::string out;
  out += "good_fraction " + fmt(good_fraction) + "\n";
  out += "min_good_consistency " + fmt(min_good_consistency) + "\n";
  out += "eps " + fmt(eps) + "\n";
  out += "relation_sum " + fmt(relation_sum) + "\n";
  out += std::string("hypotheses_met ") + (hypotheses_met ? "yes" : "no") + "\n";
  if (!failing_clause.empty()) out += "failing_clause " + failing_clause + "\n";
  out += "lemma8_r " + fmt(lemma8_r) + "\n";
  out += "subset_size " + std::to_string(subset.size()) + "\n";
  out += std::string("subset_verified ") + (subset_verified ? "yes" : "no") + "\n";
  out += "min_restricted_score " + fmt(min_restricted_score) + "\n";
  out += std::string("scores_defined ") + (scores_defined ? "yes" : "no") + "\n";
  out += "m_max " + fmt(m_max) + "\n";
  out += "m_geom " + fmt(m_geom) + "\n";
  out += "target_m_max " + fmt(target_m_max) + "\n";
  out += "target_m_geom " + fmt(target_m_geom) + "\n";
  out += std::string("m_max_ok ") + (m_max_ok ? "yes" : "no") + "\n";
  out += std::string("m_geom_ok ") + (m_geom_ok ? "yes" : "no") + "\n";
  return out;
}

std::string pair_scores_csv(const SquareMatrix& w, const SquareMatrix& R) {
  if (w.n != R.n) throw std::invalid_argument("pair_scores_csv: size mismatch");
  std::string out = "X_index,Y_index,w,R\n";
  for (std::size_t i = 0; i < w.n; ++i) {
    for (std::size_t j = 0; j < w.n; ++j) {
      if (w.at(i, j) == 0.0 && R.at(i, j) == 0.0) continue;
      out += std::to_string(i) + "," + std::to_string(j) + "," + fmt(w.at(i, j)) + "," +
             fmt(R.at(i, j)) + "\n";
    }
  }
  return out;
}

std::string snake_scores_csv(const AdversaryScores& scores) {
  std::string out = "X_index,M_A,min_v_ratio\n";
  const std::size_t n = scores.vertex_count;
  for (std::size_t i = 0; i < scores.M_A.size(); ++i) {
    double ratio = 0.0;
    bool first = true;
    for (Vertex v = 0; v < n; ++v) {
      const double mv = scores.M_A_v[i * n + v];
      if (mv > 0.0) {
        const double r = scores.M_A[i] / mv;
        if (first || r < ratio) ratio = r;
        first = false;
      }
    }
    out += std::to_string(i) + "," + fmt(scores.M_A[i]) + "," + fmt(ratio) + "\n";
  }
  return out;
}

}  // namespace snakelab
