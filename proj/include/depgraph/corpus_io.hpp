#pragma once

#include <stdexcept>
#include <string>

#include "depgraph/corpus.hpp"

namespace depgraph {

struct CorpusFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Line-delimited canonical form: a versioned magic header, then the release
// records and advisory records in corpus order, one canonical JSON object
// per line. Saving the result of a load reproduces the file byte for byte.
void save_corpus(const Corpus& corpus, const std::string& path);

// Throws CorpusFormatError for a missing/incompatible header or records
// that fail validation.
Corpus load_corpus(const std::string& path);

// FNV-1a 64 over the file bytes, as 16 hex digits.
std::string file_checksum_hex(const std::string& path);

}  // namespace depgraph
