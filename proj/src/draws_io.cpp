#include "pr2d2ord/draws_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pr2d2ord/math/stats.hpp"

namespace pr2d2ord {

namespace {
static_assert(std::endian::native == std::endian::little,
              "binary draw files assume a little-endian host");

const char kMagic[8] = {'P', 'R', '2', 'D', '2', 'O', 'R', 'D'};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// reconstruct layout offsets from parameter names
void infer_layout(PosteriorDraws& d) {
  int p = 0, ktau = 0;
  bool has_w = false;
  int phi_count = 0;
  for (const std::string& name : d.names) {
    if (name.rfind("beta.", 0) == 0) ++p;
    if (name.rfind("tau.", 0) == 0) ++ktau;
    if (name.rfind("phi.", 0) == 0) ++phi_count;
    if (name == "W") has_w = true;
  }
  d.p = p;
  d.K = ktau + 1;
  d.prior = has_w ? d.prior : PriorKind::Horseshoe;
  d.beta_offset = 0;
  d.phi_offset = phi_count > 0 ? p : -1;
  d.w_offset = has_w ? 2 * p : -1;
  d.tau_offset = static_cast<int>(d.names.size()) - ktau;
}

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("draws file truncated");
  return v;
}
}  // namespace

void write_draws_csv(const std::string& path, const PosteriorDraws& draws) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "chain,draw";
  for (const auto& n : draws.names) out << ',' << n;
  out << '\n';
  for (int c = 0; c < draws.num_chains(); ++c) {
    const Eigen::MatrixXd& chain = draws.chains[static_cast<std::size_t>(c)];
    for (Eigen::Index i = 0; i < chain.rows(); ++i) {
      out << (c + 1) << ',' << (i + 1);
      for (Eigen::Index j = 0; j < chain.cols(); ++j) {
        out << ',' << format_double(chain(i, j));
      }
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

PosteriorDraws read_draws_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty draws file " + path);
  PosteriorDraws d;
  {
    std::stringstream ss(line);
    std::string tok;
    int idx = 0;
    while (std::getline(ss, tok, ',')) {
      if (idx >= 2) d.names.push_back(tok);
      ++idx;
    }
  }
  std::vector<std::vector<double>> rows;
  std::vector<int> row_chain;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> row;
    int idx = 0, chain_id = 0;
    while (std::getline(ss, tok, ',')) {
      if (idx == 0) {
        chain_id = std::stoi(tok);
      } else if (idx >= 2) {
        row.push_back(std::stod(tok));
      }
      ++idx;
    }
    if (row.size() != d.names.size())
      throw std::runtime_error("malformed draws row in " + path);
    rows.push_back(std::move(row));
    row_chain.push_back(chain_id);
  }
  int nchains = 0;
  for (int c : row_chain) nchains = std::max(nchains, c);
  for (int c = 1; c <= nchains; ++c) {
    std::vector<std::size_t> idxs;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (row_chain[i] == c) idxs.push_back(i);
    }
    Eigen::MatrixXd chain(static_cast<Eigen::Index>(idxs.size()),
                          static_cast<Eigen::Index>(d.names.size()));
    for (std::size_t i = 0; i < idxs.size(); ++i) {
      for (std::size_t j = 0; j < d.names.size(); ++j) {
        chain(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[idxs[i]][j];
      }
    }
    d.chains.push_back(std::move(chain));
  }
  infer_layout(d);
  return d;
}

void write_draws_binary(const std::string& path, const PosteriorDraws& draws) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kMagic, 8);
  write_pod<std::uint8_t>(out, 1);
  write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(draws.prior));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(draws.num_chains()));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(draws.draws_per_chain()));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(draws.names.size()));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(draws.p));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(draws.K));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(draws.warmup));
  write_pod<std::uint64_t>(out, draws.seed);
  for (const auto& n : draws.names) {
    write_pod<std::uint16_t>(out, static_cast<std::uint16_t>(n.size()));
    out.write(n.data(), static_cast<std::streamsize>(n.size()));
  }
  for (const auto& chain : draws.chains) {
    for (Eigen::Index i = 0; i < chain.rows(); ++i) {
      for (Eigen::Index j = 0; j < chain.cols(); ++j) {
        write_pod<double>(out, chain(i, j));
      }
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

PosteriorDraws read_draws_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error(path + " is not a draws file (bad magic)");
  const auto version = read_pod<std::uint8_t>(in);
  if (version != 1) throw std::runtime_error("unsupported draws file version");
  PosteriorDraws d;
  d.prior = static_cast<PriorKind>(read_pod<std::uint8_t>(in));
  const auto nchains = read_pod<std::uint32_t>(in);
  const auto ndraws = read_pod<std::uint32_t>(in);
  const auto nparams = read_pod<std::uint32_t>(in);
  d.p = static_cast<int>(read_pod<std::uint32_t>(in));
  d.K = static_cast<int>(read_pod<std::uint32_t>(in));
  d.warmup = static_cast<int>(read_pod<std::uint32_t>(in));
  d.seed = read_pod<std::uint64_t>(in);
  for (std::uint32_t i = 0; i < nparams; ++i) {
    const auto len = read_pod<std::uint16_t>(in);
    std::string name(len, '\0');
    in.read(name.data(), len);
    if (!in) throw std::runtime_error("draws file truncated");
    d.names.push_back(std::move(name));
  }
  for (std::uint32_t c = 0; c < nchains; ++c) {
    Eigen::MatrixXd chain(ndraws, nparams);
    for (std::uint32_t i = 0; i < ndraws; ++i) {
      for (std::uint32_t j = 0; j < nparams; ++j) {
        chain(i, j) = read_pod<double>(in);
      }
    }
    d.chains.push_back(std::move(chain));
  }
  infer_layout(d);
  return d;
}

void write_summary(const std::string& path, const PosteriorDraws& draws,
                   const Diagnostics& diag) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "# posterior summary\n";
  out << "# seed: " << draws.seed << '\n';
  out << "# chains: " << draws.num_chains() << '\n';
  out << "# draws_per_chain: " << draws.draws_per_chain() << '\n';
  out << "# warmup: " << draws.warmup << '\n';
  out << "# divergences: " << draws.total_divergences() << '\n';
  if (draws.divergence_warning) {
    out << "# WARNING: divergence rate above 20%; treat results with suspicion\n";
  }
  const char* prior_name = draws.prior == PriorKind::Pr2d2ord     ? "pr2d2ord"
                           : draws.prior == PriorKind::Horseshoe ? "horseshoe"
                                                                 : "r2d2";
  out << "# prior: " << prior_name << '\n';
  const std::string skip_name =
      (draws.phi_offset >= 0) ? "phi." + std::to_string(draws.p) : "";
  if (!skip_name.empty()) {
    out << "# note: " << skip_name << " omitted (equals 1 minus the other phi)\n";
  }
  out << "parameter mean median sd q2.5 q97.5 rhat ess\n";
  for (std::size_t j = 0; j < draws.names.size(); ++j) {
    if (!skip_name.empty() && draws.names[j] == skip_name) continue;
    const std::vector<double> x = draws.column(static_cast<int>(j));
    const double mean = math::mean(x);
    const double sd = std::sqrt(math::variance(x));
    out << draws.names[j] << ' ' << format_double(mean) << ' '
        << format_double(math::quantile(x, 0.5)) << ' ' << format_double(sd) << ' '
        << format_double(math::quantile(x, 0.025)) << ' '
        << format_double(math::quantile(x, 0.975)) << ' ' << format_double(diag.rhat[j])
        << ' ' << format_double(diag.ess[j]) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace pr2d2ord
