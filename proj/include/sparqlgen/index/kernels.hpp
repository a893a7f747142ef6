#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

// Data-parallel kernels behind the vector index and the hash embedder. Each
// kernel has an OpenMP version and a serial reference with identical
// per-element arithmetic, so both return bit-identical results.
namespace sparqlgen::index::kernels {

struct Hit {
  std::size_t row = 0;
  float score = 0.0f;
};

// scores[i] = <matrix[i*dim .. i*dim+dim), query>
void score_rows(std::span<const float> matrix, std::size_t dim, std::span<const float> query, std::span<float> scores);
void score_rows_serial(std::span<const float> matrix, std::size_t dim, std::span<const float> query,
                       std::span<float> scores);

// The k best rows with eligible[row] != 0, ordered by descending score and
// ascending tie_rank[row] on equal scores.
std::vector<Hit> select_top_k(std::span<const float> scores, std::span<const std::uint8_t> eligible,
                              std::span<const std::uint32_t> tie_rank, std::size_t k);
std::vector<Hit> select_top_k_serial(std::span<const float> scores, std::span<const std::uint8_t> eligible,
                                     std::span<const std::uint32_t> tie_rank, std::size_t k);

// Signed feature hashing of lowercase alphanumeric tokens into `dim`
// buckets, L2-normalized; an all-zero vector becomes e1.
std::vector<float> hash_embed_one(const std::string& text, std::size_t dim);
std::vector<std::vector<float>> hash_embed(const std::vector<std::string>& texts, std::size_t dim);
std::vector<std::vector<float>> hash_embed_serial(const std::vector<std::string>& texts, std::size_t dim);

// Splits on ASCII non-alphanumerics and lowercases; bytes >= 0x80 are kept
// inside tokens.
std::vector<std::string> hash_tokens(const std::string& text);

}  // namespace sparqlgen::index::kernels
