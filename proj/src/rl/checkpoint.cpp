#include "strider/rl/checkpoint.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace strider::rl {

namespace {

constexpr std::array<char, 8> kMagic{'S', 'T', 'R', 'D', 'C', 'K', 'P', 'T'};

template <typename U>
void put_uint(std::ostream& out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::ostream& out, double v) { put_uint(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
 public:
  Reader(std::istream& in, const std::string& path) : in_(in), path_(path) {}

  template <typename U>
  U uint() {
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      const int c = in_.get();
      if (c == std::char_traits<char>::eof())
        throw CheckpointError(CheckpointError::Kind::corrupt, "checkpoint: truncated file " + path_);
      v |= static_cast<U>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
  }
  double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }

 private:
  std::istream& in_;
  const std::string& path_;
};

}  // namespace

void save_checkpoint(const std::string& path, const ActorCritic& model, const RunningNorm& norm) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError(CheckpointError::Kind::io, "checkpoint: cannot write " + path);
  const auto& sh = model.shape();
  out.write(kMagic.data(), kMagic.size());
  put_uint<std::uint32_t>(out, kCheckpointVersion);
  for (std::size_t v : {sh.obs_dim, sh.act_dim, sh.hidden, sh.hidden_layers})
    put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(v));
  put_uint<std::uint64_t>(out, model.params().size());
  for (double p : model.params()) put_f64(out, p);
  for (double v : model.box().low) put_f64(out, v);
  for (double v : model.box().high) put_f64(out, v);
  put_f64(out, norm.count);
  put_f64(out, norm.clip);
  if (norm.mean.size() != sh.obs_dim)
    throw std::invalid_argument("checkpoint: normaliser size does not match obs_dim");
  for (double v : norm.mean) put_f64(out, v);
  for (double v : norm.var) put_f64(out, v);
  if (!out) throw CheckpointError(CheckpointError::Kind::io, "checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError(CheckpointError::Kind::io, "checkpoint: cannot open " + path);
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic)
    throw CheckpointError(CheckpointError::Kind::bad_magic, "checkpoint: " + path + " is not a strider checkpoint");
  Reader r(in, path);
  const auto version = r.uint<std::uint32_t>();
  if (version != kCheckpointVersion)
    throw CheckpointError(CheckpointError::Kind::version,
                          "checkpoint: " + path + " has format version " + std::to_string(version) +
                              ", this build reads version " + std::to_string(kCheckpointVersion) +
                              "; retrain or convert it with a matching build");
  PolicyShape sh;
  sh.obs_dim = r.uint<std::uint32_t>();
  sh.act_dim = r.uint<std::uint32_t>();
  sh.hidden = r.uint<std::uint32_t>();
  sh.hidden_layers = r.uint<std::uint32_t>();
  if (sh.obs_dim == 0 || sh.act_dim == 0 || sh.hidden == 0 || sh.hidden_layers == 0 ||
      sh.obs_dim > 4096 || sh.act_dim > 4096 || sh.hidden > 65536 || sh.hidden_layers > 64)
    throw CheckpointError(CheckpointError::Kind::corrupt, "checkpoint: implausible dimensions in " + path);
  const auto count = r.uint<std::uint64_t>();
  const std::size_t expected =
      make_mlp_shape(sh.obs_dim, sh.hidden, sh.hidden_layers, sh.act_dim).param_count() + sh.act_dim +
      make_mlp_shape(sh.obs_dim, sh.hidden, sh.hidden_layers, 1).param_count();
  if (count != expected)
    throw CheckpointError(CheckpointError::Kind::corrupt, "checkpoint: parameter count mismatch in " + path);
  std::vector<double> params(count);
  for (auto& p : params) p = r.f64();
  ActionBox box;
  box.low.resize(sh.act_dim);
  box.high.resize(sh.act_dim);
  for (auto& v : box.low) v = r.f64();
  for (auto& v : box.high) v = r.f64();

  Checkpoint ck{ActorCritic(sh, box), RunningNorm(sh.obs_dim)};
  ck.model.params() = std::move(params);
  ck.norm.count = r.f64();
  ck.norm.clip = r.f64();
  for (auto& v : ck.norm.mean) v = r.f64();
  for (auto& v : ck.norm.var) v = r.f64();
  for (double p : ck.model.params())
    if (!std::isfinite(p)) throw CheckpointError(CheckpointError::Kind::corrupt, "checkpoint: non-finite parameter in " + path);
  return ck;
}

}  // namespace strider::rl
