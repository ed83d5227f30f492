#pragma once

#include <string>

#include "pr2d2ord/diagnostics.hpp"
#include "pr2d2ord/fit.hpp"

namespace pr2d2ord {

/// Delimited text: header "chain,draw,<param names...>", one row per draw,
/// values printed with 17 significant digits (round-trip exact).
void write_draws_csv(const std::string& path, const PosteriorDraws& draws);
PosteriorDraws read_draws_csv(const std::string& path);

/// Compact binary layout (documented in the header bytes themselves):
///   bytes 0..7  : magic "PR2D2ORD"
///   byte  8     : format version (1)
///   byte  9     : prior kind (0 pr2d2ord, 1 horseshoe, 2 r2d2)
///   u32 x 6     : chains, draws per chain, params, p, K, warmup (little-endian)
///   u64         : seed
///   per param   : u16 name length + name bytes
///   payload     : chains x draws x params IEEE-754 doubles, little-endian,
///                 row-major within each chain
void write_draws_binary(const std::string& path, const PosteriorDraws& draws);
PosteriorDraws read_draws_binary(const std::string& path);

/// Structured text summary: per-parameter mean/median/sd/2.5%/97.5%/R-hat/ESS.
/// For priors with a phi simplex the redundant last coordinate phi.p is
/// omitted from the table (it is 1 minus the sum of the others).
void write_summary(const std::string& path, const PosteriorDraws& draws,
                   const Diagnostics& diag);

}  // namespace pr2d2ord
