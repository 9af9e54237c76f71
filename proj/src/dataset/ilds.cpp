#include "ilsuite/dataset/ilds.hpp"

#include <bit>
#include <fstream>
#include <iterator>
#include <sstream>

#include "ilsuite/error.hpp"

namespace ilsuite {

namespace {

constexpr char kMagic[4] = {'I', 'L', 'D', 'S'};
constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 1 + 4 + 4 + 8 + 8;

template <typename T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
}

void put_f32(std::string& out, float value) { put_le(out, std::bit_cast<std::uint32_t>(value)); }

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <typename T>
  T get_le() {
    need(sizeof(T));
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      value |= static_cast<T>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += sizeof(T);
    return value;
  }
  float get_f32() { return std::bit_cast<float>(get_le<std::uint32_t>()); }
  std::string get_bytes(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw FormatError("ILDS: truncated file");
  }
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_ilds(const TrajectoryDataset& dataset) {
  dataset.check_consistent();
  std::string out;
  const std::size_t n = dataset.size();
  out.reserve(kHeaderBytes + 8 * dataset.trajectory_count() +
              n * (4 * (2 * dataset.state_dim + dataset.action_dim + 1) + 1) + 6 + dataset.env_name.size());
  out.append(kMagic, 4);
  out.push_back(static_cast<char>(kVersion));
  put_le<std::uint32_t>(out, dataset.state_dim);
  put_le<std::uint32_t>(out, dataset.action_dim);
  put_le<std::uint64_t>(out, n);
  put_le<std::uint64_t>(out, dataset.trajectory_count());
  for (std::uint64_t end : dataset.trajectory_ends) put_le<std::uint64_t>(out, end);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dataset.state_dim; ++j) put_f32(out, dataset.states[i * dataset.state_dim + j]);
    for (std::size_t j = 0; j < dataset.action_dim; ++j) put_f32(out, dataset.actions[i * dataset.action_dim + j]);
    put_f32(out, dataset.rewards[i]);
    for (std::size_t j = 0; j < dataset.state_dim; ++j) put_f32(out, dataset.next_states[i * dataset.state_dim + j]);
    out.push_back(static_cast<char>(dataset.terminals[i]));
  }
  if (dataset.env_name.size() > 0xffff) throw ConfigError("ILDS: environment name too long");
  put_le<std::uint32_t>(out, dataset.subsample_rate);
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(dataset.env_name.size()));
  out.append(dataset.env_name);
  return out;
}

TrajectoryDataset decode_ilds(const std::string& bytes) {
  if (bytes.size() < 5) throw FormatError("ILDS: truncated header");
  if (bytes.compare(0, 4, kMagic, 4) != 0) throw FormatError("ILDS: bad magic number");
  if (static_cast<std::uint8_t>(bytes[4]) != kVersion) throw FormatError("ILDS: unsupported version");
  Reader in(bytes);
  in.get_bytes(5);

  TrajectoryDataset d;
  d.state_dim = in.get_le<std::uint32_t>();
  d.action_dim = in.get_le<std::uint32_t>();
  const auto n = in.get_le<std::uint64_t>();
  const auto trajectories = in.get_le<std::uint64_t>();

  const std::uint64_t record = 4ull * (2ull * d.state_dim + d.action_dim + 1ull) + 1ull;
  if (trajectories > in.remaining() / 8 || (n > 0 && record > 0 && n > (in.remaining() - 8 * trajectories) / record))
    throw FormatError("ILDS: header dimensions inconsistent with payload length");

  d.trajectory_ends.reserve(trajectories);
  for (std::uint64_t t = 0; t < trajectories; ++t) d.trajectory_ends.push_back(in.get_le<std::uint64_t>());

  d.states.reserve(n * d.state_dim);
  d.next_states.reserve(n * d.state_dim);
  d.actions.reserve(n * d.action_dim);
  d.rewards.reserve(n);
  d.terminals.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < d.state_dim; ++j) d.states.push_back(in.get_f32());
    for (std::uint32_t j = 0; j < d.action_dim; ++j) d.actions.push_back(in.get_f32());
    d.rewards.push_back(in.get_f32());
    for (std::uint32_t j = 0; j < d.state_dim; ++j) d.next_states.push_back(in.get_f32());
    d.terminals.push_back(in.get_le<std::uint8_t>());
  }

  if (in.remaining() > 0) {
    d.subsample_rate = in.get_le<std::uint32_t>();
    const auto length = in.get_le<std::uint16_t>();
    d.env_name = in.get_bytes(length);
    if (in.remaining() != 0) throw FormatError("ILDS: trailing bytes after trailer");
  }
  d.check_consistent();
  return d;
}

void save_dataset(const TrajectoryDataset& dataset, const std::filesystem::path& path) {
  const std::string bytes = encode_ilds(dataset);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

TrajectoryDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("dataset '" + path.string() + "' not found");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_ilds(bytes);
}

}  // namespace ilsuite
