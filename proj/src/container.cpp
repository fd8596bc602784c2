#include "windregime/container.hpp"

#include "windregime/error.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace wr {

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix) {
  return std::filesystem::path(stem.string() + suffix);
}

void append_le(std::string& out, double value) {
  auto bits = std::bit_cast<std::uint64_t>(value);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>(bits & 0xFFU));
    bits >>= 8;
  }
}

double read_le(const char* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | static_cast<unsigned char>(p[i]);
  return std::bit_cast<double>(bits);
}

std::string read_all(const std::filesystem::path& path, ErrorCode missing) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(missing, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const Eigen::MatrixXd& Container::get(std::string_view name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return t;
  }
  throw Error(ErrorCode::CorruptBlob, "container '" + kind + "' has no tensor " + std::string(name));
}

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw Error(ErrorCode::IoError, "SHA-256 failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_all(path, ErrorCode::IoError)); }

void save_container(const std::filesystem::path& stem, const Container& container) {
  if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
  std::string blob;
  nlohmann::json entries = nlohmann::json::array();
  std::size_t offset = 0;
  for (const auto& [name, t] : container.tensors) {
    entries.push_back({{"name", name}, {"rows", t.rows()}, {"cols", t.cols()}, {"offset", offset}});
    for (Eigen::Index i = 0; i < t.size(); ++i) append_le(blob, t.data()[i]);
    offset += static_cast<std::size_t>(t.size());
  }
  const auto bin_path = with_suffix(stem, ".bin");
  nlohmann::json manifest = {
      {"format", kContainerFormat},
      {"version", kContainerVersion},
      {"kind", container.kind},
      {"meta", container.meta},
      {"blob", {{"file", bin_path.filename().string()}, {"bytes", blob.size()}, {"sha256", sha256_hex(blob)},
                {"dtype", "float64-le"}, {"order", "column-major"}}},
      {"tensors", entries},
  };
  {
    std::ofstream out(bin_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + bin_path.string());
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  }
  std::ofstream out(with_suffix(stem, ".json"));
  if (!out) throw Error(ErrorCode::IoError, "cannot write manifest for " + stem.string());
  out << manifest.dump(2) << '\n';
}

Container load_container(const std::filesystem::path& stem, std::string_view expected_kind) {
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_all(with_suffix(stem, ".json"), ErrorCode::IoError));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptBlob, std::string("manifest: ") + e.what());
  }
  try {
    if (manifest.at("format").get<std::string>() != kContainerFormat) {
      throw Error(ErrorCode::CorruptBlob, "not a windregime container");
    }
    const int version = manifest.at("version").get<int>();
    if (version != kContainerVersion) {
      throw Error(ErrorCode::VersionMismatch,
                  "container version " + std::to_string(version) + ", expected " + std::to_string(kContainerVersion));
    }
    Container c;
    c.kind = manifest.at("kind").get<std::string>();
    if (c.kind != expected_kind) {
      throw Error(ErrorCode::CorruptBlob, "expected kind '" + std::string(expected_kind) + "', found '" + c.kind + "'");
    }
    c.meta = manifest.at("meta");
    const auto& blob_info = manifest.at("blob");
    const auto bin_path = stem.parent_path() / blob_info.at("file").get<std::string>();
    const std::string blob = read_all(bin_path, ErrorCode::CorruptBlob);
    if (blob.size() != blob_info.at("bytes").get<std::size_t>()) {
      throw Error(ErrorCode::CorruptBlob, bin_path.string() + " has " + std::to_string(blob.size()) + " bytes");
    }
    if (sha256_hex(blob) != blob_info.at("sha256").get<std::string>()) {
      throw Error(ErrorCode::CorruptBlob, bin_path.string() + " checksum mismatch");
    }
    for (const auto& entry : manifest.at("tensors")) {
      const auto rows = entry.at("rows").get<Eigen::Index>();
      const auto cols = entry.at("cols").get<Eigen::Index>();
      const auto offset = entry.at("offset").get<std::size_t>();
      if (rows < 0 || cols < 0 || (offset + static_cast<std::size_t>(rows * cols)) * 8 > blob.size()) {
        throw Error(ErrorCode::CorruptBlob, "tensor extends past blob end");
      }
      Eigen::MatrixXd t(rows, cols);
      for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = read_le(blob.data() + (offset + static_cast<std::size_t>(i)) * 8);
      c.put(entry.at("name").get<std::string>(), std::move(t));
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptBlob, std::string("manifest: ") + e.what());
  }
}

}  // namespace wr
