#include "acfleet/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "acfleet/errors.hpp"

namespace acfleet {

namespace {

constexpr char kMagic[8] = {'A', 'C', 'F', 'C', 'K', 'P', 'T', '1'};
constexpr uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

void put_string(std::ostream& out, const std::string& s) {
  put<uint32_t>(out, static_cast<uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
  const uint32_t n = get<uint32_t>(in);
  std::string s(n, '\0');
  in.read(s.data(), n);
  return s;
}

}  // namespace

std::string agent_kind_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::dqn: return "dqn";
    case AgentKind::ppo_he: return "ppo_he";
    case AgentKind::ppo_nc: return "ppo_nc";
    case AgentKind::tarmac: return "tarmac";
  }
  return "unknown";
}

AgentKind agent_kind_from_name(const std::string& name) {
  if (name == "dqn") return AgentKind::dqn;
  if (name == "ppo_he") return AgentKind::ppo_he;
  if (name == "ppo_nc") return AgentKind::ppo_nc;
  if (name == "tarmac") return AgentKind::tarmac;
  throw ConfigError("unknown agent kind: " + name);
}

const Mlp& PolicyCheckpoint::net(const std::string& name) const {
  auto it = nets.find(name);
  if (it == nets.end()) throw ConfigError("checkpoint is missing network: " + name);
  return it->second;
}

void PolicyCheckpoint::save(const std::string& path,
                            const std::string& metadata_json) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open checkpoint for writing: " + path);

  out.write(kMagic, sizeof(kMagic));
  put<uint32_t>(out, kVersion);
  put<uint8_t>(out, static_cast<uint8_t>(kind));
  put<int32_t>(out, obs_size);
  put<int32_t>(out, comm_neighbours_tr);
  put<int32_t>(out, ring_size_tr);
  put<int32_t>(out, comm_rounds);
  put(out, normalization.temp_div);
  put(out, normalization.lockout_div);
  put(out, normalization.power_div);

  put<uint32_t>(out, static_cast<uint32_t>(nets.size()));
  for (const auto& [name, net] : nets) {
    put_string(out, name);
    put<uint32_t>(out, static_cast<uint32_t>(net.layer_sizes.size()));
    for (int s : net.layer_sizes) put<int32_t>(out, s);
    for (Activation a : net.activations) put<uint8_t>(out, static_cast<uint8_t>(a));
    for (size_t l = 0; l < net.num_layers(); ++l) {
      out.write(reinterpret_cast<const char*>(net.weights[l].data()),
                static_cast<std::streamsize>(net.weights[l].size() * sizeof(double)));
      out.write(reinterpret_cast<const char*>(net.biases[l].data()),
                static_cast<std::streamsize>(net.biases[l].size() * sizeof(double)));
    }
  }
  if (!out) throw ConfigError("short write while saving checkpoint: " + path);

  if (!metadata_json.empty()) {
    std::ofstream side(path + ".meta.json", std::ios::trunc);
    side << metadata_json << "\n";
  }
}

PolicyCheckpoint PolicyCheckpoint::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint: " + path);

  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ConfigError("not a checkpoint file: " + path);
  }
  if (get<uint32_t>(in) != kVersion) {
    throw ConfigError("unsupported checkpoint version: " + path);
  }

  PolicyCheckpoint ck;
  ck.kind = static_cast<AgentKind>(get<uint8_t>(in));
  ck.obs_size = get<int32_t>(in);
  ck.comm_neighbours_tr = get<int32_t>(in);
  ck.ring_size_tr = get<int32_t>(in);
  ck.comm_rounds = get<int32_t>(in);
  ck.normalization.temp_div = get<double>(in);
  ck.normalization.lockout_div = get<double>(in);
  ck.normalization.power_div = get<double>(in);

  const uint32_t nnets = get<uint32_t>(in);
  for (uint32_t k = 0; k < nnets; ++k) {
    const std::string name = get_string(in);
    const uint32_t nsizes = get<uint32_t>(in);
    Mlp net;
    net.layer_sizes.resize(nsizes);
    for (auto& s : net.layer_sizes) s = get<int32_t>(in);
    net.activations.resize(nsizes - 1);
    for (auto& a : net.activations) a = static_cast<Activation>(get<uint8_t>(in));
    for (size_t l = 0; l + 1 < nsizes; ++l) {
      Tensor2 w(net.layer_sizes[l + 1], net.layer_sizes[l]);
      in.read(reinterpret_cast<char*>(w.data()),
              static_cast<std::streamsize>(w.size() * sizeof(double)));
      Tensor2 b(1, net.layer_sizes[l + 1]);
      in.read(reinterpret_cast<char*>(b.data()),
              static_cast<std::streamsize>(b.size() * sizeof(double)));
      net.weights.push_back(std::move(w));
      net.biases.push_back(std::move(b));
    }
    if (!in) throw ConfigError("truncated checkpoint: " + path);
    ck.nets.emplace(name, std::move(net));
  }
  return ck;
}

}  // namespace acfleet
