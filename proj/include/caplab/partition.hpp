#pragma once

#include <cstdint>
#include <vector>

#include "caplab/errors.hpp"
#include "caplab/type_sequence.hpp"

namespace caplab {

/// Assignment of level indices k >= 1 to blocks, a finite stand-in for a
/// partition of the level axis into infinitely many infinite pieces.
struct PartitionSchedule {
  uint32_t block_count = 1;
  std::vector<uint32_t> table;  // explicit assignment for k = 1..|table|; empty = round robin

  // block of level k (k >= 1); past the table it wraps round-robin
  uint32_t assign(uint32_t k) const {
    if (k == 0) throw Error(Errc::PreconditionFailed, "levels are partitioned from k = 1");
    if (k <= table.size()) return table[k - 1];
    return (k - 1) % block_count;
  }
};

PartitionSchedule round_robin(uint32_t blocks);
PartitionSchedule partition_from_list(std::vector<uint32_t> table);

// true when every block index < block_count appears among k = 1..K
bool blocks_attained(const PartitionSchedule& p, uint32_t K);

// per-block fairness: result[l] = largest R such that every r' < R occurs as
// a root size at some level k <= K with assign(k) = l
std::vector<uint32_t> block_fair_up_to(const TypeSequence& ts,
                                       const PartitionSchedule& p);

}  // namespace caplab
