#include "sparqlgen/index/vector_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <set>

#include "sparqlgen/index/kernels.hpp"
#include "sparqlgen/net/sparql_client.hpp"

namespace sparqlgen::index {
namespace {

constexpr char kMagic[8] = {'S', 'P', 'Q', 'G', 'I', 'D', 'X', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
 public:
  std::string out;
  void u8(std::uint8_t v) { out.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out += s;
  }
  void f32(float f) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    u32(bits);
  }
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  void need(std::size_t n, const char* what) const {
    if (in_.size() - pos_ < n) throw CorruptIndex(std::string("truncated while reading ") + what);
  }
  std::uint8_t u8(const char* what) {
    need(1, what);
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in_[pos_++])) << (8 * i);
    return v;
  }
  std::uint64_t u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_++])) << (8 * i);
    return v;
  }
  std::string str(const char* what) {
    const std::uint32_t n = u32(what);
    need(n, what);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  float f32(const char* what) {
    const std::uint32_t bits = u32(what);
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
  }
  std::string_view raw(std::size_t n, const char* what) {
    need(n, what);
    auto v = in_.substr(pos_, n);
    pos_ += n;
    return v;
  }
  bool done() const { return pos_ == in_.size(); }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

VectorIndex::VectorIndex(std::size_t dimension, std::string fingerprint, std::vector<IndexedDoc> docs,
                         std::vector<Embedding> vectors)
    : dim_(dimension), fingerprint_(std::move(fingerprint)) {
  if (docs.size() != vectors.size()) throw std::invalid_argument("document and vector counts differ");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (vectors[i].size() != dim_) throw DimensionMismatch(dim_, vectors[i].size());
    if (!seen.insert(docs[i].id).second) continue;
    normalize(vectors[i]);
    matrix_.insert(matrix_.end(), vectors[i].begin(), vectors[i].end());
    docs_.push_back(std::move(docs[i]));
  }
  std::vector<std::uint32_t> order(docs_.size());
  std::iota(order.begin(), order.end(), 0U);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return docs_[a].id < docs_[b].id; });
  id_rank_.assign(docs_.size(), 0);
  for (std::uint32_t r = 0; r < order.size(); ++r) id_rank_[order[r]] = r;
}

std::span<const float> VectorIndex::vector(std::size_t i) const {
  return std::span<const float>(matrix_).subspan(i * dim_, dim_);
}

std::size_t VectorIndex::count(DocKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(docs_.begin(), docs_.end(), [&](const IndexedDoc& d) { return d.kind == kind; }));
}

std::vector<std::uint8_t> VectorIndex::eligibility(std::optional<DocKind> kind) const {
  std::vector<std::uint8_t> mask(docs_.size(), 1);
  if (kind) {
    for (std::size_t i = 0; i < docs_.size(); ++i) mask[i] = docs_[i].kind == *kind ? 1 : 0;
  }
  return mask;
}

void VectorIndex::check_query(std::span<const float> query, std::size_t k) const {
  if (query.size() != dim_) throw DimensionMismatch(dim_, query.size());
  if (k == 0) throw std::invalid_argument("k must be at least 1");
}

std::vector<ScoredDoc> VectorIndex::search(std::span<const float> query, std::size_t k,
                                           std::optional<DocKind> kind) const {
  check_query(query, k);
  std::vector<float> scores(docs_.size());
  kernels::score_rows(matrix_, dim_, query, scores);
  const auto mask = eligibility(kind);
  std::vector<ScoredDoc> out;
  for (const auto& hit : kernels::select_top_k(scores, mask, id_rank_, k))
    out.push_back(ScoredDoc{docs_[hit.row], std::clamp(hit.score, -1.0f, 1.0f)});
  return out;
}

std::vector<ScoredDoc> VectorIndex::search_serial(std::span<const float> query, std::size_t k,
                                                  std::optional<DocKind> kind) const {
  check_query(query, k);
  std::vector<float> scores(docs_.size());
  kernels::score_rows_serial(matrix_, dim_, query, scores);
  const auto mask = eligibility(kind);
  std::vector<ScoredDoc> out;
  for (const auto& hit : kernels::select_top_k_serial(scores, mask, id_rank_, k))
    out.push_back(ScoredDoc{docs_[hit.row], std::clamp(hit.score, -1.0f, 1.0f)});
  return out;
}

std::string VectorIndex::serialize() const {
  Writer w;
  w.out.append(kMagic, sizeof kMagic);
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(dim_));
  w.str(fingerprint_);
  w.u64(docs_.size());
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    const auto& d = docs_[i];
    w.str(d.id);
    w.u8(static_cast<std::uint8_t>(d.kind));
    w.str(d.embed_text);
    w.str(d.payload);
    w.str(d.endpoint);
    w.u8(d.source_iri ? 1 : 0);
    if (d.source_iri) w.str(*d.source_iri);
    for (float f : vector(i)) w.f32(f);
  }
  return std::move(w.out);
}

void VectorIndex::save(const std::string& path) const {
  const std::string bytes = serialize();
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write index to " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing index to " + path);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot move index into " + path);
}

VectorIndex VectorIndex::deserialize(std::string_view bytes, const std::optional<std::string>& expected_fingerprint) {
  Reader r(bytes);
  if (r.raw(sizeof kMagic, "magic") != std::string_view(kMagic, sizeof kMagic)) throw CorruptIndex("bad magic");
  const auto version = r.u32("version");
  if (version != kFormatVersion) throw CorruptIndex("unsupported format version " + std::to_string(version));
  const std::size_t dim = r.u32("dimension");
  if (dim == 0) throw CorruptIndex("zero dimension");
  std::string fingerprint = r.str("fingerprint");
  if (expected_fingerprint && *expected_fingerprint != fingerprint)
    throw ProviderMismatch(*expected_fingerprint, fingerprint);
  const std::uint64_t count = r.u64("document count");
  // Each record is at least 4 length fields, 2 flag bytes and the vector.
  if (count > r.remaining() / (18 + 4 * dim)) throw CorruptIndex("document count exceeds file size");

  std::vector<IndexedDoc> docs;
  std::vector<Embedding> vectors;
  docs.reserve(count);
  vectors.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    IndexedDoc d;
    d.id = r.str("document id");
    const auto kind = r.u8("document kind");
    if (kind > 2) throw CorruptIndex("bad document kind");
    d.kind = static_cast<DocKind>(kind);
    d.embed_text = r.str("embed text");
    d.payload = r.str("payload");
    d.endpoint = r.str("endpoint");
    if (r.u8("source flag")) d.source_iri = r.str("source IRI");
    Embedding v(dim);
    double norm = 0.0;
    for (auto& f : v) {
      f = r.f32("vector");
      norm += static_cast<double>(f) * f;
    }
    if (!(std::abs(std::sqrt(norm) - 1.0) <= 1e-5)) throw CorruptIndex("vector " + std::to_string(i) + " is not unit norm");
    docs.push_back(std::move(d));
    vectors.push_back(std::move(v));
  }
  if (!r.done()) throw CorruptIndex("trailing bytes after last record");
  VectorIndex idx;
  idx.dim_ = dim;
  idx.fingerprint_ = std::move(fingerprint);
  // Bypass re-normalization so loaded vectors are bit-identical to saved ones.
  std::set<std::string> seen;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!seen.insert(docs[i].id).second) throw CorruptIndex("duplicate document id " + docs[i].id);
    idx.matrix_.insert(idx.matrix_.end(), vectors[i].begin(), vectors[i].end());
    idx.docs_.push_back(std::move(docs[i]));
  }
  std::vector<std::uint32_t> order(idx.docs_.size());
  std::iota(order.begin(), order.end(), 0U);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return idx.docs_[a].id < idx.docs_[b].id; });
  idx.id_rank_.assign(idx.docs_.size(), 0);
  for (std::uint32_t rank = 0; rank < order.size(); ++rank) idx.id_rank_[order[rank]] = rank;
  return idx;
}

VectorIndex VectorIndex::load(const std::string& path, const std::optional<std::string>& expected_fingerprint) {
  std::string bytes;
  try {
    bytes = net::read_file(path);
  } catch (const std::runtime_error& e) {
    throw CorruptIndex(e.what());
  }
  return deserialize(bytes, expected_fingerprint);
}

}  // namespace sparqlgen::index
