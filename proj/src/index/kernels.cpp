#include "sparqlgen/index/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cctype>
#include <cmath>

#include "sparqlgen/index/doc.hpp"

namespace sparqlgen::index::kernels {
namespace {

constexpr std::uint64_t kSignBasis = 0x84222325cbf29ce4ULL;

inline float dot(const float* a, const float* b, std::size_t n) {
  float s = 0.0f;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

struct Better {
  std::span<const std::uint32_t> tie_rank;
  bool operator()(const Hit& a, const Hit& b) const {
    if (a.score != b.score) return a.score > b.score;
    return tie_rank[a.row] < tie_rank[b.row];
  }
};

void keep_best(std::vector<Hit>& hits, std::size_t k, const Better& better) {
  if (hits.size() > k) {
    std::nth_element(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(k), hits.end(), better);
    hits.resize(k);
  }
}

}  // namespace

void score_rows(std::span<const float> matrix, std::size_t dim, std::span<const float> query, std::span<float> scores) {
  const auto n = static_cast<std::ptrdiff_t>(scores.size());
  const float* m = matrix.data();
  const float* q = query.data();
  float* out = scores.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = dot(m + static_cast<std::size_t>(i) * dim, q, dim);
}

void score_rows_serial(std::span<const float> matrix, std::size_t dim, std::span<const float> query,
                       std::span<float> scores) {
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = dot(matrix.data() + i * dim, query.data(), dim);
}

std::vector<Hit> select_top_k(std::span<const float> scores, std::span<const std::uint8_t> eligible,
                              std::span<const std::uint32_t> tie_rank, std::size_t k) {
  const Better better{tie_rank};
  if (k == 0) return {};
  const auto n = static_cast<std::ptrdiff_t>(scores.size());
  std::vector<Hit> merged;
#pragma omp parallel
  {
    std::vector<Hit> local;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      if (!eligible[static_cast<std::size_t>(i)]) continue;
      local.push_back(Hit{static_cast<std::size_t>(i), scores[static_cast<std::size_t>(i)]});
      if (local.size() >= 2 * k + 64) keep_best(local, k, better);
    }
    keep_best(local, k, better);
#pragma omp critical
    merged.insert(merged.end(), local.begin(), local.end());
  }
  keep_best(merged, k, better);
  std::sort(merged.begin(), merged.end(), better);
  return merged;
}

std::vector<Hit> select_top_k_serial(std::span<const float> scores, std::span<const std::uint8_t> eligible,
                                     std::span<const std::uint32_t> tie_rank, std::size_t k) {
  std::vector<Hit> all;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (eligible[i]) all.push_back(Hit{i, scores[i]});
  std::sort(all.begin(), all.end(), Better{tie_rank});
  if (all.size() > k) all.resize(k);
  return all;
}

std::vector<std::string> hash_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c >= 0x80) {
      cur.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

std::vector<float> hash_embed_one(const std::string& text, std::size_t dim) {
  std::vector<double> acc(dim, 0.0);
  for (const auto& tok : hash_tokens(text)) {
    const std::size_t bucket = static_cast<std::size_t>(fnv1a64(tok) % dim);
    const double sign = (fnv1a64(tok, kSignBasis) & 1U) ? 1.0 : -1.0;
    acc[bucket] += sign;
  }
  double norm = 0.0;
  for (double v : acc) norm += v * v;
  std::vector<float> out(dim, 0.0f);
  if (norm == 0.0) {
    out[0] = 1.0f;
    return out;
  }
  norm = std::sqrt(norm);
  for (std::size_t i = 0; i < dim; ++i) out[i] = static_cast<float>(acc[i] / norm);
  return out;
}

std::vector<std::vector<float>> hash_embed(const std::vector<std::string>& texts, std::size_t dim) {
  std::vector<std::vector<float>> out(texts.size());
  const auto n = static_cast<std::ptrdiff_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = hash_embed_one(texts[static_cast<std::size_t>(i)], dim);
  return out;
}

std::vector<std::vector<float>> hash_embed_serial(const std::vector<std::string>& texts, std::size_t dim) {
  std::vector<std::vector<float>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(hash_embed_one(t, dim));
  return out;
}

}  // namespace sparqlgen::index::kernels
