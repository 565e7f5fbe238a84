#include "caplab/partition.hpp"

#include <set>

namespace caplab {

PartitionSchedule round_robin(uint32_t blocks) {
  if (blocks == 0) throw Error(Errc::PreconditionFailed, "need at least one block");
  return PartitionSchedule{blocks, {}};
}

PartitionSchedule partition_from_list(std::vector<uint32_t> table) {
  if (table.empty()) throw Error(Errc::PreconditionFailed, "empty partition table");
  uint32_t blocks = 0;
  for (uint32_t b : table) blocks = std::max(blocks, b + 1);
  return PartitionSchedule{blocks, std::move(table)};
}

bool blocks_attained(const PartitionSchedule& p, uint32_t K) {
  std::set<uint32_t> seen;
  for (uint32_t k = 1; k <= K; ++k) seen.insert(p.assign(k));
  return seen.size() == p.block_count;
}

std::vector<uint32_t> block_fair_up_to(const TypeSequence& ts,
                                       const PartitionSchedule& p) {
  std::vector<uint32_t> out(p.block_count, 0);
  for (uint32_t l = 0; l < p.block_count; ++l) {
    std::set<uint64_t> roots;
    for (uint32_t k = 1; k <= ts.K; ++k)
      if (p.assign(k) == l) roots.insert(ts.r[k]);
    uint32_t R = 0;
    while (roots.count(R)) ++R;
    out[l] = R;
  }
  return out;
}

}  // namespace caplab
