#pragma once

#include <filesystem>
#include <string>

#include "ilsuite/dataset/dataset.hpp"

namespace ilsuite {

// ILDS1 binary layout (little-endian):
//   "ILDS" u8(version=1) u32(state_dim) u32(action_dim) u64(transitions) u64(trajectories)
//   u64[trajectories] exclusive end offsets
//   per transition: f32[state_dim] f32[action_dim] f32(reward) f32[state_dim] u8(terminal)
// followed by an optional trailer: u32(subsample_rate) u16(name_length) name bytes.

std::string encode_ilds(const TrajectoryDataset& dataset);
TrajectoryDataset decode_ilds(const std::string& bytes);

void save_dataset(const TrajectoryDataset& dataset, const std::filesystem::path& path);
TrajectoryDataset load_dataset(const std::filesystem::path& path);

}  // namespace ilsuite
