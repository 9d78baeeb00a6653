#include "sscfl/biclustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sscfl/backend.hpp"
#include "sscfl/random.hpp"

namespace sscfl {

namespace {

constexpr double kEigTol = 1e-9;
constexpr long kMaxPowerIters = 20000;

struct Embedding {
  int dim = 0;
  std::vector<double> points;  // (n_rows + n_cols) x dim, rows first
  int count = 0;
};

// Leading nontrivial singular pairs of An = D1^-1/2 A D2^-1/2 by orthogonal
// iteration on An^T An with the trivial pair deflated. (D2^1/2 * 1, scaled)
// is an exact singular vector of An with value 1, so projecting it out leaves
// exactly the informative directions, regardless of multiplicity ties among
// the leading values.
Embedding spectral_embedding(const FeatureMatrix& A, int num_vectors) {
  const int nr = A.rows();
  const int nc = A.num_customers;

  std::vector<double> row_sum(nr, 0.0), col_sum(nc, 0.0);
  for (int r = 0; r < nr; ++r)
    for (int j = 0; j < nc; ++j) {
      row_sum[r] += A.at(r, j);
      col_sum[j] += A.at(r, j);
    }
  for (int r = 0; r < nr; ++r)
    if (row_sum[r] <= 0.0)
      throw DataError("feature matrix has a zero row among survivors");
  for (int j = 0; j < nc; ++j)
    if (col_sum[j] <= 0.0) throw DataError("feature matrix has a zero column");

  std::vector<double> an(static_cast<std::size_t>(nr) * nc);
  for (int r = 0; r < nr; ++r)
    for (int j = 0; j < nc; ++j)
      an[static_cast<std::size_t>(r) * nc + j] =
          A.at(r, j) / std::sqrt(row_sum[r] * col_sum[j]);

  // Trivial right singular vector, normalized.
  std::vector<double> triv(nc);
  double tnorm = 0.0;
  for (int j = 0; j < nc; ++j) {
    triv[j] = std::sqrt(col_sum[j]);
    tnorm += triv[j] * triv[j];
  }
  tnorm = std::sqrt(tnorm);
  for (int j = 0; j < nc; ++j) triv[j] /= tnorm;

  const int p = std::min(num_vectors, std::min(nr, nc));
  auto project_out_trivial = [&](std::vector<double>& v) {
    double dot = 0.0;
    for (int j = 0; j < nc; ++j) dot += v[j] * triv[j];
    for (int j = 0; j < nc; ++j) v[j] -= dot * triv[j];
  };
  auto apply_an = [&](const std::vector<double>& v, std::vector<double>& out) {
    out.assign(nr, 0.0);
    for (int r = 0; r < nr; ++r) {
      const double* arow = &an[static_cast<std::size_t>(r) * nc];
      double s = 0.0;
      for (int j = 0; j < nc; ++j) s += arow[j] * v[j];
      out[r] = s;
    }
  };
  auto apply_an_t = [&](const std::vector<double>& u, std::vector<double>& out) {
    out.assign(nc, 0.0);
    for (int r = 0; r < nr; ++r) {
      const double* arow = &an[static_cast<std::size_t>(r) * nc];
      const double ur = u[r];
      if (ur == 0.0) continue;
      for (int j = 0; j < nc; ++j) out[j] += arow[j] * ur;
    }
  };

  Rng rng(0x5bd1e995u);  // fixed stream; independent of the caller's seed
  std::vector<std::vector<double>> v(p, std::vector<double>(nc));
  for (int q = 0; q < p; ++q)
    for (int j = 0; j < nc; ++j) v[q][j] = rng.next_double() - 0.5;

  std::vector<double> eig(p, 0.0), prev(p, 0.0), tmp_u, tmp_v;
  auto orthonormalize = [&]() {
    for (int q = 0; q < p; ++q) {
      project_out_trivial(v[q]);
      for (int o = 0; o < q; ++o) {
        double dot = 0.0;
        for (int j = 0; j < nc; ++j) dot += v[q][j] * v[o][j];
        for (int j = 0; j < nc; ++j) v[q][j] -= dot * v[o][j];
      }
      double norm = 0.0;
      for (int j = 0; j < nc; ++j) norm += v[q][j] * v[q][j];
      norm = std::sqrt(norm);
      if (norm < 1e-300) {
        // Degenerate start direction; reseed deterministically.
        for (int j = 0; j < nc; ++j) v[q][j] = rng.next_double() - 0.5;
        project_out_trivial(v[q]);
        norm = 0.0;
        for (int j = 0; j < nc; ++j) norm += v[q][j] * v[q][j];
        norm = std::sqrt(std::max(norm, 1e-300));
      }
      for (int j = 0; j < nc; ++j) v[q][j] /= norm;
    }
  };

  orthonormalize();
  bool converged = false;
  for (long it = 0; it < kMaxPowerIters && !converged; ++it) {
    for (int q = 0; q < p; ++q) {
      apply_an(v[q], tmp_u);
      apply_an_t(tmp_u, tmp_v);
      project_out_trivial(tmp_v);
      double norm = 0.0;
      for (int j = 0; j < nc; ++j) norm += tmp_v[j] * tmp_v[j];
      eig[q] = std::sqrt(norm);  // Rayleigh estimate ||M v|| for unit v
      v[q] = tmp_v;
    }
    orthonormalize();
    converged = true;
    for (int q = 0; q < p; ++q) {
      if (std::abs(eig[q] - prev[q]) > kEigTol * std::max(1.0, eig[0]))
        converged = false;
      prev[q] = eig[q];
    }
  }
  if (!converged)
    throw SolverError("spectral embedding did not converge");

  Embedding emb;
  emb.dim = p;
  emb.count = nr + nc;
  emb.points.assign(static_cast<std::size_t>(emb.count) * p, 0.0);
  for (int q = 0; q < p; ++q) {
    const double sigma = std::sqrt(std::max(eig[q], 0.0));
    apply_an(v[q], tmp_u);  // u * sigma
    for (int r = 0; r < nr; ++r) {
      const double u = sigma > 1e-12 ? tmp_u[r] / sigma : 0.0;
      emb.points[static_cast<std::size_t>(r) * p + q] =
          u / std::sqrt(row_sum[r]);
    }
    for (int j = 0; j < nc; ++j)
      emb.points[static_cast<std::size_t>(nr + j) * p + q] =
          v[q][j] / std::sqrt(col_sum[j]);
  }
  return emb;
}

struct KmeansResult {
  std::vector<int> labels;
  double inertia = 0.0;
};

double sq_dist(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int d = 0; d < dim; ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

// k-means with k-means++ seeding. Seeding walks a canonically ordered copy of
// the points (lexicographic by coordinates), so the chosen centers do not
// depend on the input order; assignments break ties toward the lowest center
// index.
KmeansResult kmeans(const std::vector<double>& pts, int count, int dim, int k,
                    std::uint64_t seed) {
  constexpr int kRestarts = 10;
  constexpr int kIters = 100;
  constexpr double kRelTol = 1e-6;

  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double* pa = &pts[static_cast<std::size_t>(a) * dim];
    const double* pb = &pts[static_cast<std::size_t>(b) * dim];
    for (int d = 0; d < dim; ++d) {
      if (pa[d] != pb[d]) return pa[d] < pb[d];
    }
    return a < b;
  });

  KmeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  Rng base(seed);

  for (int restart = 0; restart < kRestarts; ++restart) {
    Rng rng = base.substream(restart);
    std::vector<double> centers(static_cast<std::size_t>(k) * dim, 0.0);
    std::vector<double> d2(count, 0.0);

    // k-means++ over the canonical order.
    const int first = order[static_cast<int>(
        rng.next_int(0, static_cast<std::int64_t>(count) - 1))];
    std::copy_n(&pts[static_cast<std::size_t>(first) * dim], dim,
                centers.begin());
    for (int c = 1; c < k; ++c) {
      double total = 0.0;
      for (int idx = 0; idx < count; ++idx) {
        double m = std::numeric_limits<double>::infinity();
        for (int cc = 0; cc < c; ++cc)
          m = std::min(m, sq_dist(&pts[static_cast<std::size_t>(idx) * dim],
                                  &centers[static_cast<std::size_t>(cc) * dim],
                                  dim));
        d2[idx] = m;
        total += m;
      }
      int chosen = order[0];
      if (total > 0.0) {
        const double target = rng.next_double() * total;
        double acc = 0.0;
        chosen = order[count - 1];
        for (int oi = 0; oi < count; ++oi) {
          acc += d2[order[oi]];
          if (acc >= target) {
            chosen = order[oi];
            break;
          }
        }
      }
      std::copy_n(&pts[static_cast<std::size_t>(chosen) * dim], dim,
                  &centers[static_cast<std::size_t>(c) * dim]);
    }

    std::vector<int> labels(count, 0);
    std::vector<double> sums(static_cast<std::size_t>(k) * dim);
    std::vector<int> sizes(k);
    double inertia = std::numeric_limits<double>::infinity();
    for (int it = 0; it < kIters; ++it) {
      double new_inertia = 0.0;
      for (int idx = 0; idx < count; ++idx) {
        const double* pt = &pts[static_cast<std::size_t>(idx) * dim];
        int arg = 0;
        double bestd = sq_dist(pt, &centers[0], dim);
        for (int c = 1; c < k; ++c) {
          const double d = sq_dist(pt, &centers[static_cast<std::size_t>(c) * dim], dim);
          if (d < bestd - 1e-15) {
            bestd = d;
            arg = c;
          }
        }
        labels[idx] = arg;
        new_inertia += bestd;
      }
      std::fill(sums.begin(), sums.end(), 0.0);
      std::fill(sizes.begin(), sizes.end(), 0);
      for (int idx = 0; idx < count; ++idx) {
        const double* pt = &pts[static_cast<std::size_t>(idx) * dim];
        double* s = &sums[static_cast<std::size_t>(labels[idx]) * dim];
        for (int d = 0; d < dim; ++d) s[d] += pt[d];
        ++sizes[labels[idx]];
      }
      for (int c = 0; c < k; ++c) {
        if (sizes[c] == 0) continue;  // empty cluster keeps its center
        for (int d = 0; d < dim; ++d)
          centers[static_cast<std::size_t>(c) * dim + d] =
              sums[static_cast<std::size_t>(c) * dim + d] / sizes[c];
      }
      if (std::isfinite(inertia) &&
          inertia - new_inertia <= kRelTol * std::max(inertia, 1e-300)) {
        inertia = new_inertia;
        break;
      }
      inertia = new_inertia;
    }
    if (inertia < best.inertia - 1e-15) {
      best.inertia = inertia;
      best.labels = labels;
    }
  }
  return best;
}

}  // namespace

CoclusterResult spectral_cocluster(const FeatureMatrix& A, int k,
                                   std::uint64_t seed) {
  if (k < 2) throw DataError("co-clustering needs k >= 2");
  const int nr = A.rows();
  const int nc = A.num_customers;
  const int num_vectors =
      static_cast<int>(std::ceil(std::log2(static_cast<double>(k))));
  const Embedding emb = spectral_embedding(A, num_vectors);
  const KmeansResult km = kmeans(emb.points, emb.count, emb.dim, k, seed);

  CoclusterResult out;
  out.k = k;
  out.row_labels.assign(km.labels.begin(), km.labels.begin() + nr);
  out.col_labels.assign(km.labels.begin() + nr, km.labels.begin() + nr + nc);
  return out;
}

double inter_region_loss(const RegionSet& candidate, const FeatureMatrix& A) {
  // Map original location ids back to surviving rows.
  std::vector<int> lookup;
  int max_loc = -1;
  for (int id : A.surviving) max_loc = std::max(max_loc, id);
  lookup.assign(max_loc + 1, -1);
  for (int r = 0; r < A.rows(); ++r) lookup[A.surviving[r]] = r;

  double total = 0.0;
  for (int r = 0; r < A.rows(); ++r)
    for (int j = 0; j < A.num_customers; ++j) total += A.at(r, j);
  if (total <= 0.0) throw DataError("feature matrix is empty");

  std::vector<char> in_region(A.num_customers, 0);
  double crossing = 0.0;
  for (const Region& region : candidate.regions) {
    std::fill(in_region.begin(), in_region.end(), 0);
    for (int j : region.customers) in_region[j] = 1;
    for (int loc : region.locations) {
      if (loc > max_loc || lookup[loc] < 0) continue;  // discarded rows: zero
      const int row = lookup[loc];
      for (int j = 0; j < A.num_customers; ++j)
        if (!in_region[j]) crossing += A.at(row, j);
    }
  }
  return crossing / total;
}

}  // namespace sscfl
