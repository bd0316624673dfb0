#pragma once

// Binary block data: n iid realizations of a block of m units, one column
// per variable in canonical (tier, unit, covariate) order. CSV layout is one
// row per unit per block: block_id,unit,L1..Lp,A,Y.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "netcg/graph.hpp"
#include "netcg/rng.hpp"

namespace netcg {

class BlockDataset {
 public:
  BlockDataset() = default;

  BlockDataset(int n, int m, int p) : n_(n), m_(m), p_(p), values_(size_t(n) * d(), 0) {
    if (n < 1) throw InputError("block count n must be >= 1");
    if (m < 1 || p < 1) throw InputError("m and p must be >= 1");
  }

  int n() const { return n_; }
  int m() const { return m_; }
  int p() const { return p_; }
  int d() const { return m_ * (p_ + 2); }

  uint8_t& at(int block, int col) { return values_[size_t(block) * d() + col]; }
  uint8_t at(int block, int col) const { return values_[size_t(block) * d() + col]; }

  // column index in canonical order, matching TieredChainGraph::var_index
  int col_of(const VariableId& v) const {
    switch (v.tier) {
      case Tier::L: return (v.unit - 1) * p_ + (v.cov - 1);
      case Tier::A: return m_ * p_ + (v.unit - 1);
      default: return m_ * p_ + m_ + (v.unit - 1);
    }
  }

  uint8_t value(int block, const VariableId& v) const { return at(block, col_of(v)); }

  const std::vector<uint8_t>& raw() const { return values_; }
  std::vector<uint8_t>& raw() { return values_; }

  bool matches(const TieredChainGraph& g) const { return g.m() == m_ && g.p() == p_; }

  void require_match(const TieredChainGraph& g) const {
    if (!matches(g))
      throw Error("dataset dimensions (m=" + std::to_string(m_) + ", p=" + std::to_string(p_) +
                  ") do not match graph (m=" + std::to_string(g.m()) +
                  ", p=" + std::to_string(g.p()) + ")");
  }

  // Bootstrap resample of blocks with replacement.
  BlockDataset resample_blocks(SplitRng& rng) const {
    BlockDataset out(n_, m_, p_);
    for (int b = 0; b < n_; ++b) {
      int pick = int(rng.below(uint64_t(n_)));
      for (int c = 0; c < d(); ++c) out.at(b, c) = at(pick, c);
    }
    return out;
  }

 private:
  int n_ = 0, m_ = 0, p_ = 0;
  std::vector<uint8_t> values_;
};

inline void write_dataset_csv(const BlockDataset& data, std::ostream& os) {
  os << "block_id,unit";
  for (int k = 1; k <= data.p(); ++k) os << ",L" << k;
  os << ",A,Y\n";
  for (int b = 0; b < data.n(); ++b) {
    for (int u = 1; u <= data.m(); ++u) {
      os << (b + 1) << ',' << u;
      for (int k = 1; k <= data.p(); ++k)
        os << ',' << int(data.value(b, {Tier::L, u, k}));
      os << ',' << int(data.value(b, {Tier::A, u, 0}));
      os << ',' << int(data.value(b, {Tier::Y, u, 0}));
      os << '\n';
    }
  }
}

inline void write_dataset_csv(const BlockDataset& data, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot open " + path + " for writing");
  write_dataset_csv(data, os);
}

inline BlockDataset read_dataset_csv(std::istream& is, const std::string& origin = "<stream>") {
  std::string line;
  if (!std::getline(is, line)) throw InputError(origin + ": empty dataset file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) header.push_back(f);
  }
  if (header.size() < 4 || header[0] != "block_id" || header[1] != "unit")
    throw InputError(origin + ": expected header block_id,unit,L1..Lp,A,Y");
  int p = 0;
  for (size_t i = 2; i + 2 < header.size(); ++i) {
    if (header[i] != "L" + std::to_string(i - 1))
      throw InputError(origin + ": unexpected column '" + header[i] + "'");
    ++p;
  }
  if (p < 1 || header[header.size() - 2] != "A" || header.back() != "Y")
    throw InputError(origin + ": expected header block_id,unit,L1..Lp,A,Y");

  struct Row {
    int block, unit;
    std::vector<int> vals;
  };
  std::vector<Row> rows;
  int lineno = 1;
  int max_block = 0, max_unit = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f;
    std::vector<std::string> fields;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != header.size())
      throw InputError(origin + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    Row r;
    try {
      r.block = std::stoi(fields[0]);
      r.unit = std::stoi(fields[1]);
    } catch (const std::exception&) {
      throw InputError(origin + ":" + std::to_string(lineno) + ": bad block_id/unit");
    }
    if (r.block < 1 || r.unit < 1)
      throw InputError(origin + ":" + std::to_string(lineno) + ": block_id and unit are 1-based");
    for (size_t i = 2; i < fields.size(); ++i) {
      if (fields[i] != "0" && fields[i] != "1")
        throw InputError(origin + ":" + std::to_string(lineno) + ": column '" +
                         header[i] + "' has non-binary value '" + fields[i] + "'");
      r.vals.push_back(fields[i] == "1");
    }
    max_block = std::max(max_block, r.block);
    max_unit = std::max(max_unit, r.unit);
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw InputError(origin + ": no data rows");
  if (rows.size() != size_t(max_block) * max_unit)
    throw InputError(origin + ": expected " + std::to_string(size_t(max_block) * max_unit) +
                     " rows for n=" + std::to_string(max_block) +
                     " blocks of m=" + std::to_string(max_unit) + " units, got " +
                     std::to_string(rows.size()));
  BlockDataset data(max_block, max_unit, p);
  std::vector<bool> seen(rows.size(), false);
  for (const auto& r : rows) {
    size_t slot = size_t(r.block - 1) * max_unit + (r.unit - 1);
    if (seen[slot])
      throw InputError(origin + ": duplicate row for block " + std::to_string(r.block) +
                       " unit " + std::to_string(r.unit));
    seen[slot] = true;
    for (int k = 1; k <= p; ++k)
      data.at(r.block - 1, data.col_of({Tier::L, r.unit, k})) = uint8_t(r.vals[k - 1]);
    data.at(r.block - 1, data.col_of({Tier::A, r.unit, 0})) = uint8_t(r.vals[p]);
    data.at(r.block - 1, data.col_of({Tier::Y, r.unit, 0})) = uint8_t(r.vals[p + 1]);
  }
  return data;
}

inline BlockDataset read_dataset_csv_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open " + path);
  return read_dataset_csv(is, path);
}

}  // namespace netcg
