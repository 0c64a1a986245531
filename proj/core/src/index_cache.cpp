#include <algorithm>
#include <array>
#include <fstream>
#include <iterator>

#include <cereal/archives/portable_binary.hpp>
#include <cereal/types/map.hpp>
#include <cereal/types/string.hpp>
#include <cereal/types/vector.hpp>

#include "kwsql/indexes.hpp"

namespace kwsql {
namespace {

constexpr std::array<char, 8> kMagic = {'K', 'W', 'S', 'Q', 'L', 'I', 'D', 'X'};
constexpr std::uint32_t kFormatVersion = 1;

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv_update(std::uint64_t& h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
}

}  // namespace

std::uint64_t dataset_fingerprint(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::exists(dir / "schema.json")) files.push_back(dir / "schema.json");
  if (std::filesystem::is_directory(dir)) {
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    }
  }
  std::sort(files.begin() + (files.empty() ? 0 : 1), files.end());

  std::uint64_t h = kFnvOffset;
  for (const auto& f : files) {
    fnv_update(h, f.filename().string());
    fnv_update(h, std::string_view("\0", 1));
    std::ifstream in(f, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    fnv_update(h, bytes);
    fnv_update(h, std::string_view("\0", 1));
  }
  return h;
}

void save_index_cache(const std::filesystem::path& file, std::uint64_t fingerprint, const ValueIndex& vi,
                      const SchemaIndex& si) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write index cache " + file.string());
  out.write(kMagic.data(), kMagic.size());
  cereal::PortableBinaryOutputArchive ar(out);
  ar(kFormatVersion, fingerprint, vi, si);
}

std::optional<std::pair<ValueIndex, SchemaIndex>> load_index_cache(const std::filesystem::path& file,
                                                                   std::uint64_t fingerprint) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) return std::nullopt;
  try {
    cereal::PortableBinaryInputArchive ar(in);
    std::uint32_t version = 0;
    std::uint64_t stored = 0;
    ar(version, stored);
    if (version != kFormatVersion || stored != fingerprint) return std::nullopt;
    std::pair<ValueIndex, SchemaIndex> out;
    ar(out.first, out.second);
    return out;
  } catch (const cereal::Exception&) {
    return std::nullopt;
  }
}

}  // namespace kwsql
