#pragma once

#include <cstdint>
#include <string_view>

namespace selectica {

// Counter-free deterministic generator (splitmix64 core).  A stream is fully
// determined by (master seed, replicate index, label), so replicates may be
// evaluated in any order or in parallel with results identical to sequential
// execution.
class RngStream {
  public:
    static RngStream derive(std::uint64_t master_seed, std::uint64_t replicate,
                            std::string_view label);

    std::uint64_t next_u64();

    // Uniform on the open interval (0, 1); exact zeros are redrawn.
    double uniform01();

  private:
    explicit RngStream(std::uint64_t state) : state_(state) {}
    std::uint64_t state_;
};

}  // namespace selectica
