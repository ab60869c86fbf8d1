#pragma once

#include "lplra/matrix.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace lplra {

/// Densification guard: refuse to materialize more than this many entries.
inline constexpr std::size_t kDenseEntryGuard = 200'000'000;

/// Matrix Market reader for "coordinate real general" and "array real
/// general". Any other qualifier is refused by name; malformed headers,
/// out-of-range indices and nnz mismatches raise ParseError with the line
/// number. Unlisted coordinate entries are zero.
Matrix read_matrix_market(const std::string& path);
Matrix read_matrix_market(std::istream& in);

/// Coordinate (or array) Matrix Market writer used for fixture files.
void write_matrix_market(const std::string& path, const Matrix& m, bool coordinate = true);

/// UCI docword reader: three header lines (D, W, NNZ) then "docID wordID
/// count" records. Caps of 0 mean uncapped; the dense guard applies.
Matrix read_bag_of_words(const std::string& path, std::size_t max_docs, std::size_t max_words);
Matrix read_bag_of_words(std::istream& in, std::size_t max_docs, std::size_t max_words);

/// Entries are 0 with probability 1-density, else uniform in [0,1].
Matrix gen_sparse_uniform(std::size_t n, std::size_t m, double density, std::uint64_t seed);

/// Independent uniform +-1 entries.
Matrix gen_pm1(std::size_t n, std::size_t m, std::uint64_t seed);

/// Block-diagonal n x n fixture: a single entry of value n and an all-ones
/// (n-1) x (n-1) block; the instance on which a rank-1 SVD pays an l1 cost
/// that column selection avoids.
Matrix intro_block_matrix(std::size_t n);

} // namespace lplra
