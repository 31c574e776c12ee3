#include "linbandit/output.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <openssl/evp.h>

namespace linbandit {

const char* const kTrajectoryCsvHeader =
    "t,mean_reward,se_reward,mean_risk,se_risk,mean_trace,mean_thetahat_norm,lower_short,"
    "upper_short,lower_long_risk,upper_long_risk";

namespace {

void put(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += ',';
  out += buf;
}

std::string digest_hex(const EVP_MD* md, const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, md, nullptr) != 1)
    throw std::runtime_error("digest computation failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xF];
  }
  return hex;
}

}  // namespace

std::string trajectory_csv(const TrajectorySummary& s, const BoundCurves* bounds) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::string out = kTrajectoryCsvHeader;
  out += '\n';
  for (Index i = 0; i < s.horizon; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out += std::to_string(i + 1);
    put(out, s.mean_reward[k]);
    put(out, s.se_reward[k]);
    put(out, s.mean_risk[k]);
    put(out, s.se_risk[k]);
    put(out, s.mean_trace[k]);
    put(out, s.mean_norm[k]);
    put(out, bounds ? bounds->lower_short[k] : nan);
    put(out, bounds ? bounds->upper_short[k] : nan);
    put(out, bounds ? bounds->lower_long_risk[k] : nan);
    put(out, bounds ? bounds->upper_long_risk[k] : nan);
    out += '\n';
  }
  return out;
}

std::string sha256_hex(const std::string& bytes) { return digest_hex(EVP_sha256(), bytes); }
std::string sha1_hex(const std::string& bytes) { return digest_hex(EVP_sha1(), bytes); }

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << contents;
  f.close();
  if (!f) throw ConfigError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace linbandit
