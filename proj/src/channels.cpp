#include "risac/channels.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace risac {

CVec steering_vector(int n, double angle_rad) {
  CVec a(n);
  double s = std::sin(angle_rad);
  for (int i = 0; i < n; ++i) {
    double ph = kPi * i * s;
    a(i) = Complex(std::cos(ph), std::sin(ph));
  }
  return a;
}

ChannelSet generate_channels(const SystemConfig& config,
                             const ScenarioGeometry& geometry, Rng& rng) {
  const int m = config.antennas;
  const int k = config.users;
  const int n = config.ris_elements;

  ChannelSet cs;
  cs.antennas = m;
  cs.users = k;
  cs.ris_elements = n;

  cs.bs_user_distance_m.resize(k);
  for (int i = 0; i < k; ++i)
    cs.bs_user_distance_m[i] = geometry.bs_user_distance_m.fixed()
        ? geometry.bs_user_distance_m.lo
        : rng.uniform(geometry.bs_user_distance_m.lo,
                      geometry.bs_user_distance_m.hi);
  cs.bs_target_distance_m = geometry.bs_target_distance_m.fixed()
      ? geometry.bs_target_distance_m.lo
      : rng.uniform(geometry.bs_target_distance_m.lo,
                    geometry.bs_target_distance_m.hi);

  cs.bs_user.resize(k);
  for (int i = 0; i < k; ++i) {
    double pl = path_loss(cs.bs_user_distance_m[i], geometry.bs_user_exponent);
    cs.bs_user[i] = CVec(m);
    for (int j = 0; j < m; ++j) cs.bs_user[i](j) = rng.complex_normal(pl);
  }

  cs.ris_user.resize(k);
  double pl_ru =
      path_loss(geometry.ris_user_distance_m, geometry.ris_user_exponent);
  for (int i = 0; i < k; ++i) {
    cs.ris_user[i] = CVec(n);
    for (int j = 0; j < n; ++j) cs.ris_user[i](j) = rng.complex_normal(pl_ru);
  }

  double pl_br =
      path_loss(geometry.bs_ris_distance_m, geometry.bs_ris_exponent);
  cs.bs_ris = std::sqrt(pl_br) *
              steering_vector(n, geometry.ris_arrival_rad) *
              steering_vector(m, geometry.bs_ris_departure_rad).transpose();

  cs.bs_target =
      std::sqrt(path_loss(cs.bs_target_distance_m, geometry.bs_target_exponent)) *
      steering_vector(m, geometry.target_azimuth_rad);
  cs.ris_target =
      std::sqrt(path_loss(geometry.ris_target_distance_m,
                          geometry.ris_target_exponent)) *
      steering_vector(n, geometry.target_azimuth_rad);

  return cs;
}

CVec composite_user_channel(const ChannelSet& cs, const CVec& phi, int k) {
  if (k < 0 || k >= cs.users)
    throw std::out_of_range("user index out of range");
  return cs.bs_user[k] +
         cs.bs_ris.transpose() * phi.cwiseProduct(cs.ris_user[k]);
}

CMat composite_user_channels(const ChannelSet& cs, const CVec& phi) {
  CMat h(cs.antennas, cs.users);
  for (int k = 0; k < cs.users; ++k)
    h.col(k) = composite_user_channel(cs, phi, k);
  return h;
}

CVec target_steering(const ChannelSet& cs, const CVec& phi) {
  return cs.bs_target +
         cs.bs_ris.transpose() * phi.cwiseProduct(cs.ris_target);
}

CMat target_channel(const ChannelSet& cs, const CVec& phi) {
  CVec v = target_steering(cs, phi);
  return v * v.transpose();
}

ChannelSet strip_ris(const ChannelSet& cs) {
  ChannelSet out = cs;
  out.bs_ris.setZero();
  out.ris_target.setZero();
  for (auto& h : out.ris_user) h.setZero();
  return out;
}

namespace {

void put_vec(std::ostream& os, const char* tag, const CVec& v) {
  os << tag << ' ' << v.size() << '\n';
  os.precision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    os << v(i).real() << ' ' << v(i).imag() << '\n';
}

CVec take_vec(std::istream& is, const char* tag) {
  std::string word;
  Eigen::Index n = 0;
  if (!(is >> word >> n) || word != tag)
    throw std::runtime_error(std::string("channel file: expected ") + tag);
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double re, im;
    if (!(is >> re >> im))
      throw std::runtime_error("channel file: truncated");
    v(i) = Complex(re, im);
  }
  return v;
}

}  // namespace

void save_channels(const std::string& path, const ChannelSet& cs) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write '" + path + "'");
  os << "risac-channels 1\n";
  os << cs.antennas << ' ' << cs.users << ' ' << cs.ris_elements << '\n';
  os.precision(17);
  for (int k = 0; k < cs.users; ++k) put_vec(os, "bs_user", cs.bs_user[k]);
  for (int k = 0; k < cs.users; ++k) put_vec(os, "ris_user", cs.ris_user[k]);
  put_vec(os, "bs_ris", Eigen::Map<const CVec>(cs.bs_ris.data(),
                                               cs.bs_ris.size()));
  put_vec(os, "bs_target", cs.bs_target);
  put_vec(os, "ris_target", cs.ris_target);
  os << "distances " << cs.users << '\n';
  for (double d : cs.bs_user_distance_m) os << d << '\n';
  os << cs.bs_target_distance_m << '\n';
}

ChannelSet load_channels(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  std::string magic;
  int version = 0;
  is >> magic >> version;
  if (magic != "risac-channels" || version != 1)
    throw std::runtime_error("not a channel dump: '" + path + "'");
  ChannelSet cs;
  is >> cs.antennas >> cs.users >> cs.ris_elements;
  cs.bs_user.resize(cs.users);
  cs.ris_user.resize(cs.users);
  for (int k = 0; k < cs.users; ++k) cs.bs_user[k] = take_vec(is, "bs_user");
  for (int k = 0; k < cs.users; ++k) cs.ris_user[k] = take_vec(is, "ris_user");
  CVec g = take_vec(is, "bs_ris");
  cs.bs_ris = Eigen::Map<const CMat>(g.data(), cs.ris_elements, cs.antennas);
  cs.bs_target = take_vec(is, "bs_target");
  cs.ris_target = take_vec(is, "ris_target");
  std::string word;
  int nd = 0;
  if (!(is >> word >> nd) || word != "distances")
    throw std::runtime_error("channel file: expected distances");
  cs.bs_user_distance_m.resize(nd);
  for (int i = 0; i < nd; ++i) is >> cs.bs_user_distance_m[i];
  is >> cs.bs_target_distance_m;
  if (!is) throw std::runtime_error("channel file: truncated");
  return cs;
}

namespace {

void hash_bytes(std::uint64_t& h, const void* data, size_t n) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
}

void hash_vec(std::uint64_t& h, const CVec& v) {
  hash_bytes(h, v.data(), sizeof(Complex) * v.size());
}

}  // namespace

std::uint64_t channel_hash(const ChannelSet& cs) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  int dims[3] = {cs.antennas, cs.users, cs.ris_elements};
  hash_bytes(h, dims, sizeof(dims));
  for (const auto& v : cs.bs_user) hash_vec(h, v);
  for (const auto& v : cs.ris_user) hash_vec(h, v);
  hash_bytes(h, cs.bs_ris.data(), sizeof(Complex) * cs.bs_ris.size());
  hash_vec(h, cs.bs_target);
  hash_vec(h, cs.ris_target);
  return h;
}

}  // namespace risac
